"""Exemplar bank domain types and fingerprinting."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from newsadapt.ingest.types import LABEL_NONE, LABEL_PROBLEMATIC, CleanArticle


class CorruptBank(RuntimeError):
    pass


class VersionUnsupported(RuntimeError):
    pass


class UnknownLanguage(KeyError):
    pass


class EmptyLanguagePool(ValueError):
    pass


@dataclass
class Exemplar:
    """Deduplicated article-level tuple stored in the bank.

    Uncontested-None exemplars carry empty spans and an empty rationale;
    that emptiness is meaningful and rendered as the empty-array token.
    """

    article_id: str
    language: str
    text: str
    spans: list[str]
    severity: str | None
    rationale: str
    metadata: dict[str, str] = field(default_factory=dict)
    embedding: np.ndarray | None = None

    @property
    def label(self) -> str:
        return LABEL_PROBLEMATIC if self.severity else LABEL_NONE

    def content_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "language": self.language,
            "text": self.text,
            "spans": list(self.spans),
            "severity": self.severity,
            "rationale": self.rationale,
            "metadata": dict(sorted(self.metadata.items())),
        }

    @classmethod
    def from_article(cls, article: CleanArticle) -> "Exemplar":
        return cls(
            article_id=article.article_id,
            language=article.language,
            text=article.article_text,
            spans=list(article.spans),
            severity=article.severity,
            rationale=article.rationale,
            metadata={"source_record_id": article.source_record_id},
        )


@dataclass
class RetrievalResult:
    """Ordered top-k retrieval output for one query article."""

    query_article_id: str
    items: list[tuple[Exemplar, float]]
    k_requested: int
    shortfall: bool = False

    @property
    def k_returned(self) -> int:
        return len(self.items)

    def exemplar_ids(self) -> list[str]:
        return [ex.article_id for ex, _ in self.items]


class ExemplarBank:
    """Language-partitioned exemplar store with a per-language score matrix."""

    VERSION = 1

    def __init__(self, provider_id: str, dim: int, exemplars: list[Exemplar]):
        self.provider_id = provider_id
        self.dim = dim
        self.exemplars: list[Exemplar] = sorted(
            exemplars, key=lambda e: (e.language, e.article_id)
        )
        seen: set[str] = set()
        for ex in self.exemplars:
            if ex.article_id in seen:
                raise ValueError(f"duplicate article_id in bank: {ex.article_id!r}")
            seen.add(ex.article_id)
            if ex.embedding is None:
                raise ValueError(f"exemplar {ex.article_id!r} has no embedding")
            if ex.embedding.shape != (dim,):
                raise ValueError(
                    f"exemplar {ex.article_id!r} embedding dim "
                    f"{ex.embedding.shape} != ({dim},)"
                )
            if not float(np.linalg.norm(ex.embedding)) > 0.0:
                raise ValueError(f"exemplar {ex.article_id!r} has a zero-norm embedding")
        self._by_language: dict[str, list[Exemplar]] = {}
        for ex in self.exemplars:
            self._by_language.setdefault(ex.language, []).append(ex)
        self._matrices: dict[str, np.ndarray] = {
            lang: np.stack([e.embedding for e in pool]).astype(np.float32)
            for lang, pool in self._by_language.items()
        }
        self.fingerprint = self.compute_fingerprint()

    def languages(self) -> list[str]:
        return sorted(self._by_language)

    def pool(self, language: str) -> list[Exemplar]:
        if language not in self._by_language:
            raise UnknownLanguage(language)
        return self._by_language[language]

    def matrix(self, language: str) -> np.ndarray:
        if language not in self._matrices:
            raise UnknownLanguage(language)
        return self._matrices[language]

    def article_ids(self) -> set[str]:
        return {e.article_id for e in self.exemplars}

    def __len__(self) -> int:
        return len(self.exemplars)

    def compute_fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(f"v{self.VERSION}|{self.provider_id}|{self.dim}".encode("utf-8"))
        for ex in self.exemplars:
            h.update(
                json.dumps(ex.content_dict(), ensure_ascii=False, sort_keys=True).encode(
                    "utf-8"
                )
            )
            h.update(np.ascontiguousarray(ex.embedding, dtype=np.float32).tobytes())
        return h.hexdigest()
