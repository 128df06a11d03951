"""Bank persistence.

File layout: one JSON header line (version, provider id, dim, fingerprint,
count), then one JSON exemplar record per line, then the raw little-endian
float32 embedding matrix in exemplar order. Round-trips are bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from newsadapt.bank.embedding import EmbeddingCache, EmbeddingProvider, embed_batch
from newsadapt.bank.types import CorruptBank, Exemplar, ExemplarBank, VersionUnsupported
from newsadapt.ingest.types import CleanArticle


def build_bank(
    articles: list[CleanArticle],
    provider: EmbeddingProvider,
    cache: EmbeddingCache | None = None,
) -> ExemplarBank:
    """Embed the bank side of a split into an immutable ExemplarBank."""
    if not articles:
        raise ValueError("cannot build a bank from zero articles")
    exemplars = [Exemplar.from_article(a) for a in articles]
    vectors = embed_batch([e.text for e in exemplars], provider, cache)
    for ex, vec in zip(exemplars, vectors):
        ex.embedding = vec
    return ExemplarBank(provider.provider_id, provider.dim, exemplars)


def save_bank(bank: ExemplarBank, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {
        "version": ExemplarBank.VERSION,
        "provider_id": bank.provider_id,
        "dim": bank.dim,
        "fingerprint": bank.fingerprint,
        "count": len(bank),
    }
    with open(path, "wb") as fh:
        fh.write(json.dumps(header, ensure_ascii=False, sort_keys=True).encode("utf-8"))
        fh.write(b"\n")
        for ex in bank.exemplars:
            fh.write(
                json.dumps(ex.content_dict(), ensure_ascii=False, sort_keys=True).encode(
                    "utf-8"
                )
            )
            fh.write(b"\n")
        matrix = np.stack([e.embedding for e in bank.exemplars]).astype("<f4")
        fh.write(np.ascontiguousarray(matrix).tobytes())


def load_bank(path: str | Path) -> ExemplarBank:
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            header_line = fh.readline()
            if not header_line:
                raise CorruptBank(f"{path}: empty bank file")
            try:
                header = json.loads(header_line.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise CorruptBank(f"{path}: unreadable header ({exc})") from exc
            version = header.get("version")
            if version != ExemplarBank.VERSION:
                raise VersionUnsupported(f"{path}: bank file version {version!r}")
            count = int(header.get("count", -1))
            dim = int(header.get("dim", 0))
            if count < 0 or dim < 1:
                raise CorruptBank(f"{path}: invalid header counts")

            exemplars: list[Exemplar] = []
            for i in range(count):
                line = fh.readline()
                if not line:
                    raise CorruptBank(f"{path}: truncated at exemplar {i}")
                try:
                    row = json.loads(line.decode("utf-8"))
                except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                    raise CorruptBank(f"{path}: unreadable exemplar {i} ({exc})") from exc
                exemplars.append(
                    Exemplar(
                        article_id=row["article_id"],
                        language=row["language"],
                        text=row["text"],
                        spans=list(row.get("spans") or []),
                        severity=row.get("severity"),
                        rationale=row.get("rationale") or "",
                        metadata=dict(row.get("metadata") or {}),
                    )
                )
            blob = fh.read()
    except OSError as exc:
        raise CorruptBank(f"{path}: {exc}") from exc

    expected = count * dim * 4
    if len(blob) != expected:
        raise CorruptBank(
            f"{path}: embedding matrix holds {len(blob)} bytes, expected {expected}"
        )
    matrix = np.frombuffer(blob, dtype="<f4").reshape(count, dim)
    for i, ex in enumerate(exemplars):
        ex.embedding = np.ascontiguousarray(matrix[i])

    bank = ExemplarBank(header["provider_id"], dim, exemplars)
    if bank.fingerprint != header.get("fingerprint"):
        raise CorruptBank(
            f"{path}: fingerprint mismatch (stored {header.get('fingerprint')!r}, "
            f"recomputed {bank.fingerprint!r})"
        )
    return bank
