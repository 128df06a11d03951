"""Curation-loop domain types: review items, expert corrections,
adjudication decisions."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from newsadapt.ingest.types import LABEL_NONE

STATUS_PENDING = "pending"
STATUS_REVIEWED_ONCE = "reviewed_once"
STATUS_IN_DISCUSSION = "in_discussion"
STATUS_ADJUDICATION = "adjudication"
STATUS_ADMITTED = "admitted"
STATUS_EXCLUDED = "excluded"

STATUSES = (
    STATUS_PENDING,
    STATUS_REVIEWED_ONCE,
    STATUS_IN_DISCUSSION,
    STATUS_ADJUDICATION,
    STATUS_ADMITTED,
    STATUS_EXCLUDED,
)

OUTCOME_ADMIT = "admit"
OUTCOME_EXCLUDE = "exclude"

RUBRIC_FLAGS = ("grounded_in_text", "locally_salient_framing", "non_generic")


class InvalidCorrection(ValueError):
    pass


@dataclass
class SpanSelection:
    start: int
    end: int
    text: str

    def to_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "text": self.text}

    @classmethod
    def from_dict(cls, row: dict) -> "SpanSelection":
        return cls(start=int(row["start"]), end=int(row["end"]), text=row["text"])


@dataclass
class ExpertCorrection:
    correction_id: str
    expert_id: str
    severity: str  # vocabulary entry, or the None-label for unproblematic
    spans: list[SpanSelection]
    rationale: str
    rubric: dict[str, bool]

    def validate(self, article_text: str, vocabulary: list[str]) -> None:
        text = unicodedata.normalize("NFC", article_text)
        allowed = set(vocabulary) | {LABEL_NONE}
        if self.severity not in allowed:
            raise InvalidCorrection(
                f"severity {self.severity!r} not in vocabulary {sorted(allowed)}"
            )
        missing = [flag for flag in RUBRIC_FLAGS if flag not in self.rubric]
        if missing:
            raise InvalidCorrection(f"rubric flags unanswered: {missing}")
        if self.severity == LABEL_NONE:
            if self.spans:
                raise InvalidCorrection("a None correction must carry no spans")
            if self.rationale:
                raise InvalidCorrection("a None correction must carry an empty rationale")
            return
        if not self.spans:
            raise InvalidCorrection("a Problematic correction needs at least one span")
        if not self.rationale.strip():
            raise InvalidCorrection("a Problematic correction needs a rationale")
        for span in self.spans:
            if not (0 <= span.start < span.end <= len(text)):
                raise InvalidCorrection(
                    f"span [{span.start}, {span.end}) out of range for text "
                    f"length {len(text)}"
                )
            if text[span.start : span.end] != span.text:
                raise InvalidCorrection(
                    f"span [{span.start}, {span.end}) does not slice to its "
                    f"surface text"
                )

    def span_texts(self) -> list[str]:
        return [s.text for s in self.spans]

    def to_dict(self) -> dict:
        return {
            "correction_id": self.correction_id,
            "expert_id": self.expert_id,
            "severity": self.severity,
            "spans": [s.to_dict() for s in self.spans],
            "rationale": self.rationale,
            "rubric": dict(self.rubric),
        }

    @classmethod
    def from_dict(cls, row: dict) -> "ExpertCorrection":
        return cls(
            correction_id=row["correction_id"],
            expert_id=row["expert_id"],
            severity=row["severity"],
            spans=[SpanSelection.from_dict(s) for s in row.get("spans") or []],
            rationale=row.get("rationale") or "",
            rubric={k: bool(v) for k, v in (row.get("rubric") or {}).items()},
        )


@dataclass
class AdjudicationDecision:
    adjudicator_id: str
    outcome: str  # "admit" | "exclude"
    correction_id: str | None = None  # required for admit
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "adjudicator_id": self.adjudicator_id,
            "outcome": self.outcome,
            "correction_id": self.correction_id,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "AdjudicationDecision":
        return cls(
            adjudicator_id=row["adjudicator_id"],
            outcome=row["outcome"],
            correction_id=row.get("correction_id"),
            note=row.get("note", ""),
        )


@dataclass
class ReviewItem:
    item_id: str
    article_id: str
    language: str
    article_text: str
    model_assessment: dict
    status: str = STATUS_PENDING
    reviews: list[ExpertCorrection] = field(default_factory=list)
    decision: AdjudicationDecision | None = None
    admitted_correction_id: str | None = None
    version: int = 0

    def reviewer_ids(self) -> list[str]:
        seen: list[str] = []
        for review in self.reviews:
            if review.expert_id not in seen:
                seen.append(review.expert_id)
        return seen

    def latest_by_expert(self) -> dict[str, ExpertCorrection]:
        latest: dict[str, ExpertCorrection] = {}
        for review in self.reviews:
            latest[review.expert_id] = review
        return latest

    def admitted_correction(self) -> ExpertCorrection | None:
        if self.admitted_correction_id is None:
            return None
        for review in self.reviews:
            if review.correction_id == self.admitted_correction_id:
                return review
        return None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "article_id": self.article_id,
            "language": self.language,
            "article_text": self.article_text,
            "model_assessment": dict(self.model_assessment),
            "status": self.status,
            "reviews": [r.to_dict() for r in self.reviews],
            "decision": self.decision.to_dict() if self.decision else None,
            "admitted_correction_id": self.admitted_correction_id,
            "version": self.version,
        }
