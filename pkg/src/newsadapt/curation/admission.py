"""Agreement-gated admission of corrected items into a new bank version."""

from __future__ import annotations

from newsadapt.bank.embedding import EmbeddingCache, EmbeddingProvider, embed_batch
from newsadapt.bank.retrieval import check_provider
from newsadapt.bank.types import Exemplar, ExemplarBank
from newsadapt.curation.models import STATUS_ADMITTED, ReviewItem
from newsadapt.ingest.types import LABEL_NONE


class ContaminationAttempt(RuntimeError):
    def __init__(self, article_id: str):
        super().__init__(
            f"article {article_id!r} belongs to the held-out test set and can "
            "never enter the exemplar bank"
        )
        self.article_id = article_id


class NotAdmitted(RuntimeError):
    pass


def exemplar_from_item(item: ReviewItem) -> Exemplar:
    """Turn an admitted review item into its bank exemplar using the
    canonical correction."""
    if item.status != STATUS_ADMITTED:
        raise NotAdmitted(f"item {item.item_id!r} is {item.status!r}, not admitted")
    correction = item.admitted_correction()
    if correction is None:
        raise NotAdmitted(f"item {item.item_id!r} lacks an admitted correction")
    unproblematic = correction.severity == LABEL_NONE
    return Exemplar(
        article_id=item.article_id,
        language=item.language,
        text=item.article_text,
        spans=[] if unproblematic else correction.span_texts(),
        severity=None if unproblematic else correction.severity,
        rationale="" if unproblematic else correction.rationale,
        metadata={"admitted_from": item.item_id},
    )


def rebuild_bank_with_admissions(
    bank: ExemplarBank,
    admitted: list[Exemplar],
    provider: EmbeddingProvider,
    test_article_ids: set[str],
    cache: EmbeddingCache | None = None,
) -> ExemplarBank:
    """New immutable bank version with the admitted exemplars folded in.

    The contamination guard runs before any embedding work; an admitted
    article_id already present in the bank replaces the prior exemplar
    (the expert correction supersedes the seeded version).
    """
    for ex in admitted:
        if ex.article_id in test_article_ids:
            raise ContaminationAttempt(ex.article_id)

    check_provider(bank, provider)
    if not admitted:
        return bank

    texts = [ex.text for ex in admitted]
    vectors = embed_batch(texts, provider, cache)
    merged: dict[str, Exemplar] = {e.article_id: e for e in bank.exemplars}
    for ex, vec in zip(admitted, vectors):
        merged[ex.article_id] = Exemplar(
            article_id=ex.article_id,
            language=ex.language,
            text=ex.text,
            spans=list(ex.spans),
            severity=ex.severity,
            rationale=ex.rationale,
            metadata=dict(ex.metadata),
            embedding=vec,
        )
    return ExemplarBank(bank.provider_id, bank.dim, list(merged.values()))
