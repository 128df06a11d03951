"""Corpus format configuration: which columns/fields hold which record parts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_FIELDS = {
    "record_id": "record_id",
    "article_id": "article_id",
    "language": "language",
    "article_text": "article_text",
    "label": "label",
    "severity": "severity",
    "span_text": "span_text",
    "span_offsets": "span_offsets",
    "rationale": "rationale",
    "annotator_id": "annotator_id",
    "annotator_meta": "annotator_meta",
}

# Common surface spellings normalized onto the canonical label set.
DEFAULT_LABEL_ALIASES = {
    "none": "None",
    "problematic": "Problematic",
    "na": "NA",
    "n/a": "NA",
}

DEFAULT_SEVERITY_VOCABULARY = ["Low", "Medium", "High"]


@dataclass
class CorpusFormat:
    """Declares the input layout plus the corpus-level vocabularies."""

    layout: str = "jsonl"  # "jsonl" or "csv"
    fields: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FIELDS))
    languages: list[str] = field(default_factory=lambda: ["fa", "it"])
    severity_vocabulary: list[str] = field(
        default_factory=lambda: list(DEFAULT_SEVERITY_VOCABULARY)
    )
    label_aliases: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_LABEL_ALIASES)
    )

    def __post_init__(self) -> None:
        if self.layout not in ("jsonl", "csv"):
            raise ValueError(f"unsupported corpus layout: {self.layout!r}")
        missing = set(DEFAULT_FIELDS) - set(self.fields)
        if missing:
            raise ValueError(f"format config missing field names: {sorted(missing)}")

    def normalize_label(self, raw: str) -> str | None:
        return self.label_aliases.get(raw.strip().lower())

    @classmethod
    def from_file(cls, path: str | Path) -> "CorpusFormat":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusFormat":
        fields_cfg = dict(DEFAULT_FIELDS)
        fields_cfg.update(data.get("fields") or {})
        aliases = dict(DEFAULT_LABEL_ALIASES)
        aliases.update(
            {k.lower(): v for k, v in (data.get("label_aliases") or {}).items()}
        )
        return cls(
            layout=data.get("layout", "jsonl"),
            fields=fields_cfg,
            languages=list(data.get("languages") or ["fa", "it"]),
            severity_vocabulary=list(
                data.get("severity_vocabulary") or DEFAULT_SEVERITY_VOCABULARY
            ),
            label_aliases=aliases,
        )

    def to_dict(self) -> dict:
        return {
            "layout": self.layout,
            "fields": dict(self.fields),
            "languages": list(self.languages),
            "severity_vocabulary": list(self.severity_vocabulary),
            "label_aliases": dict(self.label_aliases),
        }
