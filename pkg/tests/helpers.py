"""Shared builders for synthetic corpora, records, and banks."""

from __future__ import annotations

import json
import random

from newsadapt.ingest.types import AnnotationRecord, CleanArticle

FA_WORDS = [
    "خبر", "اقتصاد", "دولت", "تحریم", "بازار", "سیاست", "مردم",
    "افزایش", "کاهش", "گزارش", "قیمت", "نفت", "مجلس", "انتخابات",
]
IT_WORDS = [
    "notizia", "governo", "economia", "mercato", "politica", "aumento",
    "calo", "rapporto", "cittadini", "riforma", "giudici", "migranti",
]
WORDS = {"fa": FA_WORDS, "it": IT_WORDS}


def make_text(language: str, rng: random.Random, words: int = 12) -> str:
    pool = WORDS.get(language, IT_WORDS)
    return " ".join(rng.choice(pool) for _ in range(words))


def make_record(
    record_id: str,
    article_id: str,
    language: str = "fa",
    article_text: str | None = None,
    label: str = "Problematic",
    severity: str | None = "High",
    span_text: list[str] | None = None,
    rationale: str = "claims are framed one-sidedly",
    annotator_id: str = "ann-1",
    annotator_meta: dict | None = None,
) -> AnnotationRecord:
    text = article_text if article_text is not None else f"sample article body {article_id}"
    if label == "Problematic" and span_text is None:
        span_text = [text.split()[0]]
    return AnnotationRecord(
        record_id=record_id,
        article_id=article_id,
        language=language,
        article_text=text,
        label=label,
        severity=severity if label == "Problematic" else None,
        span_text=span_text or [],
        span_offsets=[],
        rationale=rationale if label == "Problematic" else "",
        annotator_id=annotator_id,
        annotator_meta=annotator_meta or {},
    )


def record_to_row(record: AnnotationRecord) -> dict:
    return {
        "record_id": record.record_id,
        "article_id": record.article_id,
        "language": record.language,
        "article_text": record.article_text,
        "label": record.label,
        "severity": record.severity,
        "span_text": record.span_text,
        "span_offsets": [list(p) for p in record.span_offsets],
        "rationale": record.rationale,
        "annotator_id": record.annotator_id,
        "annotator_meta": record.annotator_meta,
    }


def corpus_jsonl(records: list[AnnotationRecord]) -> str:
    return "\n".join(json.dumps(record_to_row(r), ensure_ascii=False) for r in records)


def make_article(
    article_id: str,
    language: str = "fa",
    label: str = "Problematic",
    severity: str | None = "High",
    text: str | None = None,
    spans: list[str] | None = None,
    rationale: str = "one-sided framing of the events",
) -> CleanArticle:
    body = text if text is not None else f"article body for {article_id}"
    problematic = label == "Problematic"
    return CleanArticle(
        article_id=article_id,
        language=language,
        article_text=body,
        label=label,
        severity=severity if problematic else None,
        spans=(spans if spans is not None else [body.split()[0]]) if problematic else [],
        rationale=rationale if problematic else "",
        source_record_id=f"{article_id}-r1",
    )


def synthetic_articles(
    count: int,
    language: str,
    seed: int = 0,
    vocabulary: tuple[str, ...] = ("Low", "Medium", "High"),
    prefix: str | None = None,
) -> list[CleanArticle]:
    """Deterministic clean articles with a natural None/Problematic mix."""
    rng = random.Random(f"{seed}:{language}")
    prefix = prefix or language
    articles = []
    for i in range(count):
        text = make_text(language, rng, words=10 + rng.randrange(8))
        problematic = rng.random() < 0.7
        if problematic:
            tokens = text.split()
            start = rng.randrange(len(tokens) - 2)
            span = " ".join(tokens[start : start + 2])
            articles.append(
                make_article(
                    f"{prefix}-{i:04d}",
                    language=language,
                    label="Problematic",
                    severity=rng.choice(vocabulary),
                    text=text,
                    spans=[span],
                    rationale=f"frames {tokens[0]} against {tokens[-1]} one-sidedly",
                )
            )
        else:
            articles.append(
                make_article(
                    f"{prefix}-{i:04d}", language=language, label="None", text=text
                )
            )
    return articles


def build_test_bank(articles, dim: int = 128, n: int = 3):
    from newsadapt.bank.embedding import HashedNgramProvider
    from newsadapt.bank.store import build_bank

    provider = HashedNgramProvider(dim=dim, n=n)
    return build_bank(articles, provider), provider
