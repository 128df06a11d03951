from newsadapt.curation.admission import (
    ContaminationAttempt,
    NotAdmitted,
    exemplar_from_item,
    rebuild_bank_with_admissions,
)
from newsadapt.curation.machine import (
    DEFAULT_CONCORDANCE_SPAN_F1,
    IllegalTransition,
    ReviewMachine,
    SelfAdjudication,
    TransitionEvent,
    VersionConflict,
    corrections_concordant,
)
from newsadapt.curation.models import (
    AdjudicationDecision,
    ExpertCorrection,
    InvalidCorrection,
    ReviewItem,
    RUBRIC_FLAGS,
    STATUS_ADJUDICATION,
    STATUS_ADMITTED,
    STATUS_EXCLUDED,
    STATUS_IN_DISCUSSION,
    STATUS_PENDING,
    STATUS_REVIEWED_ONCE,
    SpanSelection,
)
from newsadapt.curation.service import ItemNotInAssignment, build_app, provider_from_id
from newsadapt.curation.storage import ItemStore, RatingStore

__all__ = [
    "AdjudicationDecision",
    "ContaminationAttempt",
    "DEFAULT_CONCORDANCE_SPAN_F1",
    "ExpertCorrection",
    "IllegalTransition",
    "InvalidCorrection",
    "ItemNotInAssignment",
    "ItemStore",
    "NotAdmitted",
    "RatingStore",
    "ReviewItem",
    "ReviewMachine",
    "RUBRIC_FLAGS",
    "STATUS_ADJUDICATION",
    "STATUS_ADMITTED",
    "STATUS_EXCLUDED",
    "STATUS_IN_DISCUSSION",
    "STATUS_PENDING",
    "STATUS_REVIEWED_ONCE",
    "SelfAdjudication",
    "SpanSelection",
    "TransitionEvent",
    "VersionConflict",
    "build_app",
    "corrections_concordant",
    "exemplar_from_item",
    "provider_from_id",
    "rebuild_bank_with_admissions",
]
