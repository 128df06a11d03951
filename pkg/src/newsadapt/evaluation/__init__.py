from newsadapt.evaluation.ab import (
    AbAssignment,
    AbRating,
    AbReport,
    FORBIDDEN_EXPORT_KEYS,
    IncompleteItem,
    IndivisiblePartition,
    OrphanRating,
    RATING_DIMENSIONS,
    SideScores,
    aggregate_ab_ratings,
    build_ab_assignments,
    export_for_evaluators,
    provenance_map,
    read_ratings,
    write_jsonl,
)
from newsadapt.evaluation.disparity import (
    MissingGroup,
    SubgroupSlice,
    alignment_disparity,
    disparity_delta,
)
from newsadapt.evaluation.metrics import (
    EmbeddingCosineScorer,
    EmptyInput,
    HttpScorer,
    ScorerUnavailable,
    UNPARSED_LABEL,
    rationale_similarity,
    severity_macro_f1,
    span_f1,
    tokenize,
)
from newsadapt.evaluation.report import (
    emit_report,
    language_disparities,
    summarize_scores,
)
from newsadapt.evaluation.scoring import CellScore, reference_label, score_cell, score_cells

__all__ = [
    "AbAssignment",
    "AbRating",
    "AbReport",
    "CellScore",
    "EmbeddingCosineScorer",
    "EmptyInput",
    "FORBIDDEN_EXPORT_KEYS",
    "HttpScorer",
    "IncompleteItem",
    "IndivisiblePartition",
    "MissingGroup",
    "OrphanRating",
    "RATING_DIMENSIONS",
    "ScorerUnavailable",
    "SideScores",
    "SubgroupSlice",
    "UNPARSED_LABEL",
    "aggregate_ab_ratings",
    "alignment_disparity",
    "build_ab_assignments",
    "disparity_delta",
    "emit_report",
    "export_for_evaluators",
    "language_disparities",
    "provenance_map",
    "rationale_similarity",
    "read_ratings",
    "reference_label",
    "score_cell",
    "score_cells",
    "severity_macro_f1",
    "span_f1",
    "summarize_scores",
    "tokenize",
    "write_jsonl",
]
