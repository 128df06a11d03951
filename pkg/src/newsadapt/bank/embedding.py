"""Embedding providers: remote HTTP endpoint and deterministic offline fallback.

Both honor the same contract: identical text yields an identical vector
within one provider version. Batch calls are cached by (provider id, text
hash), so repeated corpus builds and retrievals never re-embed.
"""

from __future__ import annotations

import hashlib
import logging
import threading

import numpy as np
import requests

from newsadapt._kernels import ngram_count_vector
from newsadapt.ingest.types import nfc

logger = logging.getLogger(__name__)


class ProviderUnavailable(RuntimeError):
    pass


class DimensionMismatch(ValueError):
    pass


class EmbeddingProvider:
    """Contract: deterministic, order-preserving, fixed dimension."""

    provider_id: str = ""
    dim: int = 0
    batch_limit: int = 64
    max_text_len: int | None = None
    calls: int = 0

    def embed_texts(self, texts: list[str]) -> np.ndarray:
        raise NotImplementedError


class HashedNgramProvider(EmbeddingProvider):
    """Offline fallback: L2-normalized hashed character n-gram frequencies."""

    def __init__(self, dim: int = 512, n: int = 3):
        self.dim = dim
        self.n = n
        self.provider_id = f"hashed-ngram-v1:n={n}:d={dim}"
        self.batch_limit = 1024
        self.max_text_len = None
        self.calls = 0

    def embed_texts(self, texts: list[str]) -> np.ndarray:
        self.calls += 1
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for i, text in enumerate(texts):
            counts = ngram_count_vector(nfc(text), self.n, self.dim)
            norm = float(np.linalg.norm(counts))
            if norm > 0.0:
                out[i] = (counts / norm).astype(np.float32)
        return out


class HttpEmbeddingProvider(EmbeddingProvider):
    """Remote embedding endpoint: POST {"texts": [...]} -> {"embeddings": [[...]]}."""

    def __init__(
        self,
        url: str,
        dim: int,
        provider_id: str | None = None,
        batch_limit: int = 64,
        max_text_len: int | None = 8192,
        timeout: float = 60.0,
        session: requests.Session | None = None,
    ):
        self.url = url
        self.dim = dim
        self.provider_id = provider_id or f"http:{url}:d={dim}"
        self.batch_limit = batch_limit
        self.max_text_len = max_text_len
        self.timeout = timeout
        self.session = session or requests.Session()
        self.calls = 0

    def embed_texts(self, texts: list[str]) -> np.ndarray:
        self.calls += 1
        try:
            resp = self.session.post(
                self.url, json={"texts": texts}, timeout=self.timeout
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"embedding endpoint unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ProviderUnavailable(
                f"embedding endpoint returned HTTP {resp.status_code}"
            )
        vectors = resp.json().get("embeddings")
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise ProviderUnavailable("embedding endpoint returned a malformed body")
        arr = np.asarray(vectors, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[1] != self.dim:
            raise DimensionMismatch(
                f"provider returned dim {arr.shape[-1] if arr.ndim else '?'}, "
                f"declared {self.dim}"
            )
        return arr


class EmbeddingCache:
    """In-memory vector cache keyed by (provider id, text sha256).

    Identical keys always carry identical vectors (provider determinism), so
    concurrent insertion is last-writer-wins by construction.
    """

    def __init__(self):
        self._store: dict[tuple[str, str], np.ndarray] = {}
        self._lock = threading.Lock()

    @staticmethod
    def key(provider_id: str, text: str) -> tuple[str, str]:
        return provider_id, hashlib.sha256(text.encode("utf-8")).hexdigest()

    def get(self, provider_id: str, text: str) -> np.ndarray | None:
        return self._store.get(self.key(provider_id, text))

    def put(self, provider_id: str, text: str, vector: np.ndarray) -> None:
        with self._lock:
            self._store[self.key(provider_id, text)] = vector

    def __len__(self) -> int:
        return len(self._store)


def embed_batch(
    texts: list[str],
    provider: EmbeddingProvider,
    cache: EmbeddingCache | None = None,
) -> np.ndarray:
    """Embed texts order-preservingly, serving cache hits without provider calls."""
    if not texts:
        raise ValueError("embed_batch requires a non-empty text list")

    prepared: list[str] = []
    for text in texts:
        if provider.max_text_len is not None and len(text) > provider.max_text_len:
            logger.warning(
                "truncating text of length %d to provider limit %d",
                len(text),
                provider.max_text_len,
            )
            text = text[: provider.max_text_len]
        prepared.append(text)

    out: list[np.ndarray | None] = [None] * len(prepared)
    missing: list[int] = []
    for i, text in enumerate(prepared):
        cached = cache.get(provider.provider_id, text) if cache is not None else None
        if cached is not None:
            out[i] = cached
        else:
            missing.append(i)

    for chunk_start in range(0, len(missing), provider.batch_limit):
        chunk = missing[chunk_start : chunk_start + provider.batch_limit]
        if not chunk:
            continue
        vectors = provider.embed_texts([prepared[i] for i in chunk])
        if vectors.shape != (len(chunk), provider.dim):
            raise DimensionMismatch(
                f"provider returned shape {vectors.shape}, "
                f"expected ({len(chunk)}, {provider.dim})"
            )
        for row, i in enumerate(chunk):
            vec = np.ascontiguousarray(vectors[row], dtype=np.float32)
            out[i] = vec
            if cache is not None:
                cache.put(provider.provider_id, prepared[i], vec)

    return np.stack([v for v in out])  # type: ignore[arg-type]
