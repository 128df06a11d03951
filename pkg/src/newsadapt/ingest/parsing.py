"""Raw corpus parsing with per-row diagnostics.

Rows arrive as UTF-8 JSONL or CSV (per the format config). Every input row
either yields an AnnotationRecord or a positioned ParseDiagnostic; strict
mode raises instead of collecting.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import BinaryIO, Iterable

from newsadapt.ingest.formats import CorpusFormat
from newsadapt.ingest.types import LABEL_PROBLEMATIC, AnnotationRecord, nfc


class MalformedRow(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class OffsetOutOfRange(ValueError):
    def __init__(self, record_id: str, detail: str = ""):
        super().__init__(f"record {record_id}: span offset out of range {detail}".rstrip())
        self.record_id = record_id


@dataclass
class ParseDiagnostic:
    line: int
    code: str  # "MalformedRow" | "OffsetOutOfRange"
    reason: str
    record_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "line": self.line,
            "code": self.code,
            "reason": self.reason,
            "record_id": self.record_id,
        }


def parse_annotations(
    raw: BinaryIO | bytes | str,
    fmt: CorpusFormat,
    strict: bool = False,
) -> tuple[list[AnnotationRecord], list[ParseDiagnostic]]:
    """Parse the corpus stream into records plus positioned diagnostics."""
    text = _as_text(raw)
    records: list[AnnotationRecord] = []
    diagnostics: list[ParseDiagnostic] = []
    seen_ids: set[str] = set()

    for line_no, row in _iter_rows(text, fmt):
        try:
            record = _row_to_record(row, fmt, line_no)
            if record.record_id in seen_ids:
                raise MalformedRow(line_no, f"duplicate record_id {record.record_id!r}")
            _validate_spans(record, line_no)
            seen_ids.add(record.record_id)
            records.append(record)
        except OffsetOutOfRange as exc:
            if strict:
                raise
            diagnostics.append(
                ParseDiagnostic(
                    line=line_no,
                    code="OffsetOutOfRange",
                    reason=str(exc),
                    record_id=exc.record_id,
                )
            )
        except MalformedRow as exc:
            if strict:
                raise
            diagnostics.append(
                ParseDiagnostic(line=line_no, code="MalformedRow", reason=exc.reason)
            )
    return records, diagnostics


def _as_text(raw: BinaryIO | bytes | str) -> str:
    if isinstance(raw, str):
        return raw
    if isinstance(raw, (bytes, bytearray)):
        return bytes(raw).decode("utf-8")
    data = raw.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _iter_rows(text: str, fmt: CorpusFormat) -> Iterable[tuple[int, dict]]:
    if fmt.layout == "jsonl":
        for i, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                yield i, {"__malformed__": f"invalid JSON: {exc.msg}"}
                continue
            if not isinstance(row, dict):
                yield i, {"__malformed__": "row is not an object"}
                continue
            yield i, row
    else:  # csv
        reader = csv.DictReader(io.StringIO(text))
        # header is line 1; data rows start at 2
        for i, row in enumerate(reader, start=2):
            yield i, {k: v for k, v in row.items() if k is not None}


def _row_to_record(row: dict, fmt: CorpusFormat, line_no: int) -> AnnotationRecord:
    if "__malformed__" in row:
        raise MalformedRow(line_no, row["__malformed__"])
    f = fmt.fields

    def required(name: str) -> str:
        value = row.get(f[name])
        if value is None or (isinstance(value, str) and not value.strip()):
            raise MalformedRow(line_no, f"missing required field {f[name]!r}")
        return str(value)

    raw_label = required("label")
    label = fmt.normalize_label(raw_label)
    if label is None:
        raise MalformedRow(line_no, f"unrecognized label {raw_label!r}")

    language = required("language").strip()
    if fmt.languages and language not in fmt.languages:
        raise MalformedRow(line_no, f"language {language!r} not in configured set")

    severity = row.get(f["severity"])
    if isinstance(severity, str):
        severity = severity.strip() or None

    span_text = _as_str_list(row.get(f["span_text"]), line_no, f["span_text"])
    span_offsets = _as_offset_list(row.get(f["span_offsets"]), line_no, f["span_offsets"])

    rationale = row.get(f["rationale"]) or ""
    meta = row.get(f["annotator_meta"]) or {}
    if isinstance(meta, str):
        try:
            meta = json.loads(meta) if meta.strip() else {}
        except json.JSONDecodeError:
            raise MalformedRow(line_no, f"field {f['annotator_meta']!r} is not valid JSON")
    if not isinstance(meta, dict):
        raise MalformedRow(line_no, f"field {f['annotator_meta']!r} must be a mapping")

    return AnnotationRecord(
        record_id=required("record_id"),
        article_id=required("article_id"),
        language=language,
        article_text=nfc(required("article_text")),
        label=label,
        severity=severity if isinstance(severity, str) else None,
        span_text=[nfc(s) for s in span_text],
        span_offsets=span_offsets,
        rationale=nfc(str(rationale)),
        annotator_id=str(row.get(f["annotator_id"]) or ""),
        annotator_meta={str(k): str(v) for k, v in meta.items()},
    )


def _as_str_list(value, line_no: int, field_name: str) -> list[str]:
    if value is None or value == "":
        return []
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            # a bare string cell is taken as a single span
            return [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise MalformedRow(line_no, f"field {field_name!r} must be a list of strings")
    return list(value)


def _as_offset_list(value, line_no: int, field_name: str) -> list[tuple[int, int]]:
    if value is None or value == "":
        return []
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError:
            raise MalformedRow(line_no, f"field {field_name!r} is not valid JSON")
    if not isinstance(value, list):
        raise MalformedRow(line_no, f"field {field_name!r} must be a list of pairs")
    out: list[tuple[int, int]] = []
    for pair in value:
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, int) for x in pair)
        ):
            raise MalformedRow(line_no, f"field {field_name!r} must hold [start, end] pairs")
        out.append((pair[0], pair[1]))
    return out


def _validate_spans(record: AnnotationRecord, line_no: int) -> None:
    text = record.article_text  # already NFC
    for start, end in record.span_offsets:
        if not (0 <= start < end <= len(text)):
            raise OffsetOutOfRange(record.record_id, f"[{start}, {end}) on length {len(text)}")
    if record.span_offsets and record.span_text:
        if len(record.span_offsets) != len(record.span_text):
            raise MalformedRow(line_no, "span_text and span_offsets length mismatch")
        for (start, end), surface in zip(record.span_offsets, record.span_text):
            if nfc(text[start:end]) != surface:
                raise MalformedRow(
                    line_no,
                    f"span slice [{start}, {end}) does not match span_text",
                )
    if record.span_offsets and not record.span_text:
        record.span_text = [text[start:end] for start, end in record.span_offsets]
