"""Domain types for the annotation cleaning pipeline."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

LABEL_NONE = "None"
LABEL_PROBLEMATIC = "Problematic"
LABEL_NA = "NA"

LABELS = (LABEL_NONE, LABEL_PROBLEMATIC, LABEL_NA)


def nfc(text: str) -> str:
    return unicodedata.normalize("NFC", text)


def rationale_length(text: str) -> int:
    """Tie-break length: Unicode code points after NFC normalization."""
    return len(nfc(text))


@dataclass
class AnnotationRecord:
    """One annotator's judgment of one article."""

    record_id: str
    article_id: str
    language: str
    article_text: str
    label: str
    severity: str | None = None
    span_text: list[str] = field(default_factory=list)
    span_offsets: list[tuple[int, int]] = field(default_factory=list)
    rationale: str = ""
    annotator_id: str = ""
    annotator_meta: dict[str, str] = field(default_factory=dict)


@dataclass
class CleanArticle:
    """Single-reference article row after dedup: one winner per article."""

    article_id: str
    language: str
    article_text: str
    label: str
    severity: str | None
    spans: list[str]
    rationale: str
    source_record_id: str
    rejected_record_ids: list[str] = field(default_factory=list)

    def content_key(self) -> tuple:
        """Equality key ignoring rejection provenance (idempotence checks)."""
        return (
            self.article_id,
            self.language,
            self.article_text,
            self.label,
            self.severity,
            tuple(self.spans),
            self.rationale,
        )

    def to_dict(self) -> dict:
        return {
            "article_id": self.article_id,
            "language": self.language,
            "article_text": self.article_text,
            "label": self.label,
            "severity": self.severity,
            "spans": list(self.spans),
            "rationale": self.rationale,
            "source_record_id": self.source_record_id,
            "rejected_record_ids": list(self.rejected_record_ids),
        }

    @classmethod
    def from_dict(cls, row: dict) -> "CleanArticle":
        return cls(
            article_id=row["article_id"],
            language=row["language"],
            article_text=row["article_text"],
            label=row["label"],
            severity=row.get("severity"),
            spans=list(row.get("spans") or []),
            rationale=row.get("rationale") or "",
            source_record_id=row.get("source_record_id", ""),
            rejected_record_ids=list(row.get("rejected_record_ids") or []),
        )


@dataclass
class BankSplit:
    """Disjoint bank/test partition of the cleaned article table."""

    bank: list[CleanArticle]
    test: list[CleanArticle]
    seed: int
    per_language_holdout: dict[str, int]

    def bank_ids(self) -> set[str]:
        return {a.article_id for a in self.bank}

    def test_ids(self) -> set[str]:
        return {a.article_id for a in self.test}
