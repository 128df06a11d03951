from newsadapt.bank.embedding import (
    DimensionMismatch,
    EmbeddingCache,
    EmbeddingProvider,
    HashedNgramProvider,
    HttpEmbeddingProvider,
    ProviderUnavailable,
    embed_batch,
)
from newsadapt.bank.retrieval import ZeroNorm, check_provider, cosine_similarity, retrieve
from newsadapt.bank.store import build_bank, load_bank, save_bank
from newsadapt.bank.types import (
    CorruptBank,
    EmptyLanguagePool,
    Exemplar,
    ExemplarBank,
    RetrievalResult,
    UnknownLanguage,
    VersionUnsupported,
)

__all__ = [
    "CorruptBank",
    "DimensionMismatch",
    "EmbeddingCache",
    "EmbeddingProvider",
    "EmptyLanguagePool",
    "Exemplar",
    "ExemplarBank",
    "HashedNgramProvider",
    "HttpEmbeddingProvider",
    "ProviderUnavailable",
    "RetrievalResult",
    "UnknownLanguage",
    "VersionUnsupported",
    "ZeroNorm",
    "build_bank",
    "check_provider",
    "cosine_similarity",
    "embed_batch",
    "load_bank",
    "retrieve",
    "save_bank",
]
