"""The tagged output format: rendering exemplar annotations and parsing
model completions back into structured assessments.

Schema: three tagged fields SEVERITY / SPANS / RATIONALE. Spans are a JSON
array of surface strings; the literal token ``[]`` marks an empty field.
Field content is entity-escaped on render so embedded tag text survives a
round trip.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from newsadapt.bank.types import Exemplar
from newsadapt.ingest.types import LABEL_NONE

EMPTY_ARRAY = "[]"

PARSE_CLEAN = "clean"
PARSE_REPAIRED = "repaired"
PARSE_FAILED = "failed"

_STRICT = {
    name: re.compile(rf"<{name}>(.*?)</{name}>", re.DOTALL)
    for name in ("SEVERITY", "SPANS", "RATIONALE")
}
_TOLERANT = {
    name: re.compile(
        rf"<\s*{name}\s*>(.*?)<\s*/\s*{name}\s*>", re.DOTALL | re.IGNORECASE
    )
    for name in ("SEVERITY", "SPANS", "RATIONALE")
}


def escape_field(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;")


def unescape_field(text: str) -> str:
    return text.replace("&lt;", "<").replace("&amp;", "&")


@dataclass
class Assessment:
    """Structured model output aligned with the reference for scoring."""

    severity: str | None
    spans: list[str] = field(default_factory=list)
    rationale: str = ""
    parse_status: str = PARSE_CLEAN
    raw: str = ""

    def to_dict(self) -> dict:
        return {
            "severity": self.severity,
            "spans": list(self.spans),
            "rationale": self.rationale,
            "parse_status": self.parse_status,
            "raw": self.raw,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "Assessment":
        return cls(
            severity=row.get("severity"),
            spans=list(row.get("spans") or []),
            rationale=row.get("rationale") or "",
            parse_status=row.get("parse_status", PARSE_FAILED),
            raw=row.get("raw", ""),
        )


def render_fields(severity_text: str, spans: list[str], rationale: str) -> str:
    """Three tagged lines; spans as an escaped JSON array, [] when empty."""
    spans_text = (
        EMPTY_ARRAY if not spans else json.dumps(spans, ensure_ascii=False)
    )
    rationale_text = rationale if rationale else EMPTY_ARRAY
    return (
        f"<SEVERITY>{escape_field(severity_text)}</SEVERITY>\n"
        f"<SPANS>{escape_field(spans_text)}</SPANS>\n"
        f"<RATIONALE>{escape_field(rationale_text)}</RATIONALE>"
    )


def render_assessment(assessment: Assessment, none_label: str = LABEL_NONE) -> str:
    severity_text = assessment.severity if assessment.severity else none_label
    return render_fields(severity_text, assessment.spans, assessment.rationale)


def render_exemplar(ex: Exemplar) -> str:
    """One in-context example block: text plus its tagged annotation.

    Uncontested-None exemplars render their span and rationale slots as the
    literal empty-array token, signalling that nothing was flagged.
    """
    severity_text = ex.severity if ex.severity else LABEL_NONE
    annotation = render_fields(severity_text, ex.spans, ex.rationale)
    return f"Example:\nText: {escape_field(ex.text)}\n{annotation}"


def parse_model_output(
    raw: str,
    vocabulary: list[str],
    none_label: str = LABEL_NONE,
) -> Assessment:
    """Extract the tagged fields, tolerantly repairing sloppy tag casing.

    Parse failures are data, never exceptions: an output with no usable
    severity tag comes back with parse_status="failed", empty spans and an
    unset severity.
    """
    strict = {name: rx.search(raw) for name, rx in _STRICT.items()}
    if all(strict.values()):
        assessment, consistent = _build(
            strict["SEVERITY"].group(1),  # type: ignore[union-attr]
            strict["SPANS"].group(1),  # type: ignore[union-attr]
            strict["RATIONALE"].group(1),  # type: ignore[union-attr]
            vocabulary,
            none_label,
            raw,
        )
        assessment.parse_status = PARSE_CLEAN if consistent else PARSE_REPAIRED
        return assessment

    tolerant = {name: rx.search(raw) for name, rx in _TOLERANT.items()}
    if tolerant["SEVERITY"]:
        assessment, _ = _build(
            tolerant["SEVERITY"].group(1),
            tolerant["SPANS"].group(1) if tolerant["SPANS"] else EMPTY_ARRAY,
            tolerant["RATIONALE"].group(1) if tolerant["RATIONALE"] else "",
            vocabulary,
            none_label,
            raw,
        )
        assessment.parse_status = PARSE_REPAIRED
        return assessment

    return Assessment(
        severity=None, spans=[], rationale="", parse_status=PARSE_FAILED, raw=raw
    )


def _build(
    severity_raw: str,
    spans_raw: str,
    rationale_raw: str,
    vocabulary: list[str],
    none_label: str,
    raw: str,
) -> tuple[Assessment, bool]:
    """Assemble an Assessment; the flag reports full schema consistency."""
    consistent = True

    severity = unescape_field(severity_raw).strip()
    known = {v.lower(): v for v in list(vocabulary) + [none_label]}
    canonical = known.get(severity.lower())
    if canonical is not None:
        if canonical != severity:
            consistent = False
        severity = canonical
    else:
        consistent = False

    spans_text = unescape_field(spans_raw).strip()
    spans: list[str]
    if spans_text == EMPTY_ARRAY or not spans_text:
        spans = []
    else:
        try:
            decoded = json.loads(spans_text)
            if isinstance(decoded, list) and all(isinstance(s, str) for s in decoded):
                spans = decoded
            else:
                spans = [spans_text]
                consistent = False
        except json.JSONDecodeError:
            spans = [spans_text]
            consistent = False

    rationale = unescape_field(rationale_raw).strip()
    if rationale == EMPTY_ARRAY:
        rationale = ""

    if severity == none_label and spans:
        consistent = False

    return (
        Assessment(
            severity=severity if severity != none_label else none_label,
            spans=spans,
            rationale=rationale,
            raw=raw,
        ),
        consistent,
    )
