"""Four-step cleaning pipeline: filter, exclude conflicts, resolve, split.

Produces exactly one reference row per surviving article and a deterministic
bank/test partition. Natural label skew is preserved throughout; nothing is
rebalanced.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from newsadapt.ingest.formats import CorpusFormat
from newsadapt.ingest.parsing import ParseDiagnostic, parse_annotations
from newsadapt.ingest.types import (
    LABEL_NA,
    LABEL_NONE,
    LABEL_PROBLEMATIC,
    AnnotationRecord,
    BankSplit,
    CleanArticle,
    rationale_length,
)

# Rejection reason codes, checked in this order.
REASON_NOT_APPLICABLE = "NotApplicable"
REASON_MISSING_SEVERITY = "MissingSeverity"
REASON_INVALID_SEVERITY = "InvalidSeverity"
REASON_MISSING_SPAN = "MissingSpan"
REASON_MISSING_RATIONALE = "MissingRationale"


class EmptyGroup(ValueError):
    pass


class InsufficientArticles(ValueError):
    def __init__(self, language: str, have: int, need: int):
        super().__init__(f"language {language!r}: have {have} articles, need {need}")
        self.language = language
        self.have = have
        self.need = need


def filter_unusable(
    records: list[AnnotationRecord],
    severity_vocabulary: list[str] | None = None,
) -> tuple[list[AnnotationRecord], list[tuple[AnnotationRecord, str]]]:
    """Drop NA rows and Problematic rows missing severity/span/rationale."""
    vocab = set(severity_vocabulary or [])
    kept: list[AnnotationRecord] = []
    rejected: list[tuple[AnnotationRecord, str]] = []
    for rec in records:
        reason = _rejection_reason(rec, vocab)
        if reason is None:
            kept.append(rec)
        else:
            rejected.append((rec, reason))
    return kept, rejected


def _rejection_reason(rec: AnnotationRecord, vocab: set[str]) -> str | None:
    if rec.label == LABEL_NA:
        return REASON_NOT_APPLICABLE
    if rec.label == LABEL_PROBLEMATIC:
        if not rec.severity:
            return REASON_MISSING_SEVERITY
        if vocab and rec.severity not in vocab:
            return REASON_INVALID_SEVERITY
        if not any(s.strip() for s in rec.span_text):
            return REASON_MISSING_SPAN
        if not rec.rationale.strip():
            return REASON_MISSING_RATIONALE
    return None


def group_by_article(
    records: list[AnnotationRecord],
) -> dict[str, list[AnnotationRecord]]:
    groups: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for rec in records:
        groups[rec.article_id].append(rec)
    return dict(groups)


def exclude_binary_conflicts(
    groups: dict[str, list[AnnotationRecord]],
) -> tuple[dict[str, list[AnnotationRecord]], list[str]]:
    """Remove whole articles where None and Problematic annotations collide."""
    surviving: dict[str, list[AnnotationRecord]] = {}
    excluded: list[str] = []
    for article_id, group in groups.items():
        labels = {rec.label for rec in group}
        if LABEL_NONE in labels and LABEL_PROBLEMATIC in labels:
            excluded.append(article_id)
        else:
            surviving[article_id] = group
    return surviving, sorted(excluded)


def resolve_severity_conflicts(group: list[AnnotationRecord]) -> CleanArticle:
    """Collapse a conflict-free group to one article-level reference.

    All-None groups collapse to an empty-annotation row. All-Problematic
    groups keep the annotation with the longest rationale (NFC code points);
    equal lengths fall back to the smallest record_id.
    """
    if not group:
        raise EmptyGroup("cannot resolve an empty annotation group")
    labels = {rec.label for rec in group}
    if labels == {LABEL_NONE}:
        winner = min(group, key=lambda r: r.record_id)
        losers = sorted(r.record_id for r in group if r.record_id != winner.record_id)
        return CleanArticle(
            article_id=winner.article_id,
            language=winner.language,
            article_text=winner.article_text,
            label=LABEL_NONE,
            severity=None,
            spans=[],
            rationale="",
            source_record_id=winner.record_id,
            rejected_record_ids=losers,
        )
    if labels == {LABEL_PROBLEMATIC}:
        winner = min(
            group, key=lambda r: (-rationale_length(r.rationale), r.record_id)
        )
        losers = sorted(r.record_id for r in group if r.record_id != winner.record_id)
        return CleanArticle(
            article_id=winner.article_id,
            language=winner.language,
            article_text=winner.article_text,
            label=LABEL_PROBLEMATIC,
            severity=winner.severity,
            spans=list(winner.span_text),
            rationale=winner.rationale,
            source_record_id=winner.record_id,
            rejected_record_ids=losers,
        )
    raise ValueError(
        f"group for article {group[0].article_id!r} still carries a binary conflict"
    )


def split_bank_test(
    articles: list[CleanArticle],
    holdout: dict[str, int],
    seed: int,
) -> BankSplit:
    """Deterministic per-language uniform holdout; remainder becomes the bank.

    Each language draws from an independent seeded stream, so adding a
    language never perturbs another language's split.
    """
    by_language: dict[str, list[CleanArticle]] = defaultdict(list)
    for art in articles:
        by_language[art.language].append(art)

    test_ids: set[str] = set()
    for language, count in sorted(holdout.items()):
        pool = sorted(by_language.get(language, []), key=lambda a: a.article_id)
        if len(pool) < count:
            raise InsufficientArticles(language, len(pool), count)
        rng = random.Random(f"{seed}:{language}")
        test_ids.update(a.article_id for a in rng.sample(pool, count))

    ordered = sorted(articles, key=lambda a: (a.language, a.article_id))
    bank = [a for a in ordered if a.article_id not in test_ids]
    test = [a for a in ordered if a.article_id in test_ids]
    return BankSplit(bank=bank, test=test, seed=seed, per_language_holdout=dict(holdout))


@dataclass
class PipelineReport:
    """Counts for every cleaning stage, for auditing the dedup pipeline."""

    parsed_records: int = 0
    parse_diagnostics: list[ParseDiagnostic] = field(default_factory=list)
    rejected_by_reason: Counter = field(default_factory=Counter)
    binary_conflict_articles: int = 0
    excluded_article_ids: list[str] = field(default_factory=list)
    resolved_articles: int = 0
    severity_conflict_articles: int = 0
    per_language_label_counts: dict[str, Counter] = field(default_factory=dict)
    bank_size: int = 0
    test_size: int = 0

    def to_dict(self) -> dict:
        return {
            "parsed_records": self.parsed_records,
            "parse_diagnostics": [d.to_dict() for d in self.parse_diagnostics],
            "rejected_by_reason": dict(sorted(self.rejected_by_reason.items())),
            "binary_conflict_articles": self.binary_conflict_articles,
            "excluded_article_ids": list(self.excluded_article_ids),
            "resolved_articles": self.resolved_articles,
            "severity_conflict_articles": self.severity_conflict_articles,
            "per_language_label_counts": {
                lang: dict(sorted(counts.items()))
                for lang, counts in sorted(self.per_language_label_counts.items())
            },
            "bank_size": self.bank_size,
            "test_size": self.test_size,
        }

    def render_text(self) -> str:
        lines = ["cleaning pipeline report", "========================"]
        lines.append(f"parsed records:            {self.parsed_records}")
        lines.append(f"parse diagnostics:         {len(self.parse_diagnostics)}")
        for reason, count in sorted(self.rejected_by_reason.items()):
            lines.append(f"rejected [{reason}]: {count}")
        lines.append(f"binary-conflict articles:  {self.binary_conflict_articles}")
        lines.append(f"severity-conflict articles:{self.severity_conflict_articles}")
        lines.append(f"clean articles:            {self.resolved_articles}")
        for lang, counts in sorted(self.per_language_label_counts.items()):
            per_label = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
            lines.append(f"  {lang}: {per_label}")
        lines.append(f"bank size:                 {self.bank_size}")
        lines.append(f"test size:                 {self.test_size}")
        return "\n".join(lines) + "\n"


def clean_articles(
    records: list[AnnotationRecord],
    severity_vocabulary: list[str] | None = None,
    report: PipelineReport | None = None,
) -> list[CleanArticle]:
    """Steps 1-3 on parsed records: filter, exclude conflicts, resolve."""
    report = report if report is not None else PipelineReport()
    kept, rejected = filter_unusable(records, severity_vocabulary)
    for _, reason in rejected:
        report.rejected_by_reason[reason] += 1

    groups, excluded_ids = exclude_binary_conflicts(group_by_article(kept))
    report.binary_conflict_articles = len(excluded_ids)
    report.excluded_article_ids = excluded_ids

    articles = []
    for article_id in sorted(groups):
        group = groups[article_id]
        if len(group) > 1 and all(r.label == LABEL_PROBLEMATIC for r in group):
            report.severity_conflict_articles += 1
        articles.append(resolve_severity_conflicts(group))

    report.resolved_articles = len(articles)
    per_lang: dict[str, Counter] = defaultdict(Counter)
    for art in articles:
        per_lang[art.language][art.label] += 1
    report.per_language_label_counts = dict(per_lang)
    return articles


def build_master_table(
    raw,
    fmt: CorpusFormat,
    holdout: dict[str, int],
    seed: int,
) -> tuple[BankSplit, PipelineReport]:
    """Full pipeline: parse, clean, split; returns the split plus its report."""
    report = PipelineReport()
    records, diagnostics = parse_annotations(raw, fmt)
    report.parsed_records = len(records)
    report.parse_diagnostics = diagnostics

    articles = clean_articles(records, fmt.severity_vocabulary, report)
    split = split_bank_test(articles, holdout, seed)
    report.bank_size = len(split.bank)
    report.test_size = len(split.test)
    return split, report
