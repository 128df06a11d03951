"""Append-only generation cache keyed by request hash.

Every completed request is one JSONL line; reloading the file rebuilds the
cache, so interrupted matrix runs resume without re-hitting the provider.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from pathlib import Path


def cache_key(model_id: str, prompt: str, temperature: float, max_tokens: int) -> str:
    payload = f"{model_id}\x1f{temperature!r}\x1f{max_tokens}\x1f{prompt}"
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class GenerationRecord:
    cache_key: str
    text: str
    latency_ms: float
    provider_request_id: str
    timestamp: float
    retry_count: int
    model_id: str

    def to_dict(self) -> dict:
        return {
            "cache_key": self.cache_key,
            "text": self.text,
            "latency_ms": self.latency_ms,
            "provider_request_id": self.provider_request_id,
            "timestamp": self.timestamp,
            "retry_count": self.retry_count,
            "model_id": self.model_id,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "GenerationRecord":
        return cls(
            cache_key=row["cache_key"],
            text=row["text"],
            latency_ms=float(row["latency_ms"]),
            provider_request_id=row.get("provider_request_id", ""),
            timestamp=float(row.get("timestamp", 0.0)),
            retry_count=int(row.get("retry_count", 0)),
            model_id=row.get("model_id", ""),
        )


class GenerationCache:
    """Single-writer append log with concurrent readers."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._records: dict[str, GenerationRecord] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    if not line.strip():
                        continue
                    record = GenerationRecord.from_dict(json.loads(line))
                    self._records[record.cache_key] = record

    def get(self, key: str) -> GenerationRecord | None:
        return self._records.get(key)

    def put(self, record: GenerationRecord) -> None:
        with self._lock:
            self._records[record.cache_key] = record
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record.to_dict(), ensure_ascii=False))
                    fh.write("\n")

    def __len__(self) -> int:
        return len(self._records)
