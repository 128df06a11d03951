"""Same-language dense top-k retrieval with a test-contamination guard.

Scoring is an exhaustive scan of the language pool: no label filtering, no
quotas, no approximate index. Ties break on ascending article_id and the
query's own article is always excluded.
"""

from __future__ import annotations

import numpy as np

from newsadapt._kernels import cosine_scores
from newsadapt.bank.embedding import EmbeddingCache, EmbeddingProvider, embed_batch
from newsadapt.bank.types import (
    CorruptBank,
    EmptyLanguagePool,
    ExemplarBank,
    RetrievalResult,
)
from newsadapt.ingest.types import CleanArticle


class ZeroNorm(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def cosine_similarity(u, v) -> float:
    """(u . v) / (|u| |v|), accumulated in float64."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} are incompatible")
    na = float(np.sqrt(np.dot(a, a)))
    nb = float(np.sqrt(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroNorm("cosine similarity undefined for zero-norm vectors")
    return float(np.dot(a, b) / (na * nb))


def check_provider(bank: ExemplarBank, provider: EmbeddingProvider) -> None:
    """Guard: retrieving against a bank built with a different provider."""
    if provider.provider_id != bank.provider_id or provider.dim != bank.dim:
        raise CorruptBank(
            f"bank fingerprint {bank.fingerprint[:12]} was built with provider "
            f"{bank.provider_id!r} (d={bank.dim}); configured provider is "
            f"{provider.provider_id!r} (d={provider.dim})"
        )


def retrieve(
    query: CleanArticle,
    bank: ExemplarBank,
    provider: EmbeddingProvider,
    k: int,
    cache: EmbeddingCache | None = None,
) -> RetrievalResult:
    """Top-k same-language exemplars by descending cosine similarity."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    check_provider(bank, provider)

    pool = bank.pool(query.language)  # raises UnknownLanguage
    candidates = [ex for ex in pool if ex.article_id != query.article_id]
    if not candidates:
        raise EmptyLanguagePool(
            f"no retrievable exemplars for language {query.language!r}"
        )

    query_vec = embed_batch([query.article_text], provider, cache)[0]
    if not float(np.linalg.norm(query_vec)) > 0.0:
        raise ZeroNorm(f"query {query.article_id!r} embeds to a zero vector")

    matrix = bank.matrix(query.language)
    scores = cosine_scores(query_vec, matrix)
    ranked = sorted(
        (
            (float(scores[i]), ex)
            for i, ex in enumerate(pool)
            if ex.article_id != query.article_id
        ),
        key=lambda pair: (-pair[0], pair[1].article_id),
    )
    top = ranked[:k]
    return RetrievalResult(
        query_article_id=query.article_id,
        items=[(ex, score) for score, ex in top],
        k_requested=k,
        shortfall=len(candidates) < k,
    )
