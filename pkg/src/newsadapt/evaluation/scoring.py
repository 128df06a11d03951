"""Join matrix results with the article-level reference and score each cell."""

from __future__ import annotations

from dataclasses import dataclass

from newsadapt.evaluation.metrics import (
    UNPARSED_LABEL,
    rationale_similarity,
    span_f1,
)
from newsadapt.gateway.runner import CellResult
from newsadapt.ingest.types import LABEL_NONE, CleanArticle
from newsadapt.prompting.output import PARSE_FAILED


@dataclass
class CellScore:
    cell_id: str
    article_id: str
    language: str
    condition: str
    model_id: str
    pred_label: str
    ref_label: str
    span_f1: float
    rationale_similarity: float
    parse_status: str

    def to_dict(self) -> dict:
        return {
            "cell_id": self.cell_id,
            "article_id": self.article_id,
            "language": self.language,
            "condition": self.condition,
            "model_id": self.model_id,
            "pred_label": self.pred_label,
            "ref_label": self.ref_label,
            "span_f1": self.span_f1,
            "rationale_similarity": self.rationale_similarity,
            "parse_status": self.parse_status,
        }


def reference_label(article: CleanArticle) -> str:
    """The scoring label: the severity for Problematic items, else None."""
    return article.severity if article.severity else LABEL_NONE


def score_cell(cell: CellResult, reference: CleanArticle, scorer) -> CellScore:
    """Score one cell. Failed parses take the reserved UNPARSED label (always
    wrong), span F1 0, rationale similarity 0."""
    ref_label = reference_label(reference)
    if cell.assessment.parse_status == PARSE_FAILED:
        return CellScore(
            cell_id=cell.cell_id,
            article_id=cell.article_id,
            language=cell.language,
            condition=cell.condition,
            model_id=cell.model_id,
            pred_label=UNPARSED_LABEL,
            ref_label=ref_label,
            span_f1=0.0,
            rationale_similarity=0.0,
            parse_status=cell.assessment.parse_status,
        )
    pred_label = cell.assessment.severity or UNPARSED_LABEL
    return CellScore(
        cell_id=cell.cell_id,
        article_id=cell.article_id,
        language=cell.language,
        condition=cell.condition,
        model_id=cell.model_id,
        pred_label=pred_label,
        ref_label=ref_label,
        span_f1=span_f1(cell.assessment.spans, reference.spans, reference.article_text),
        rationale_similarity=rationale_similarity(
            cell.assessment.rationale, reference.rationale, scorer
        ),
        parse_status=cell.assessment.parse_status,
    )


def score_cells(
    cells: list[CellResult],
    references: dict[str, CleanArticle],
    scorer,
) -> list[CellScore]:
    scores = []
    for cell in cells:
        reference = references.get(cell.article_id)
        if reference is None:
            raise KeyError(
                f"cell {cell.cell_id!r} references unknown article "
                f"{cell.article_id!r}"
            )
        scores.append(score_cell(cell, reference, scorer))
    scores.sort(key=lambda s: s.cell_id)
    return scores
