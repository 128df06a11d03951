"""Automated metrics: severity Macro-F1, best-match token-overlap span F1,
and rationale similarity.

Span F1 empty rules are strict: empty-vs-empty scores 1.0, any mismatch in
emptiness scores 0.0. Multi-span items greedily match predicted and gold
spans by pairwise F1 (no reuse) and divide the matched mass by
max(|pred|, |gold|), penalizing both over- and under-generation.
"""

from __future__ import annotations

import unicodedata
from collections import Counter

import requests

from newsadapt.bank.embedding import EmbeddingCache, EmbeddingProvider, embed_batch
from newsadapt.bank.retrieval import cosine_similarity

# Reserved label assigned to unparseable model outputs; always wrong.
UNPARSED_LABEL = "UNPARSED"


class EmptyInput(ValueError):
    pass


class ScorerUnavailable(RuntimeError):
    pass


def tokenize(span: str) -> list[str]:
    """NFC-normalize, split on Unicode whitespace, case-fold.

    Case folding is a no-op for caseless scripts (e.g. Farsi) and lowers
    cased ones (e.g. Italian), so the comparison stays script-fair.
    """
    return [t.casefold() for t in unicodedata.normalize("NFC", span).split()]


def _pair_f1(pred_tokens: Counter, gold_tokens: Counter) -> float:
    overlap = sum((pred_tokens & gold_tokens).values())
    total_pred = sum(pred_tokens.values())
    total_gold = sum(gold_tokens.values())
    if overlap == 0 or total_pred == 0 or total_gold == 0:
        return 0.0
    precision = overlap / total_pred
    recall = overlap / total_gold
    return 2.0 * precision * recall / (precision + recall)


def span_f1(pred_spans: list[str], gold_spans: list[str], article_text: str = "") -> float:
    """Best-match token-overlap F1 for one item.

    `article_text` is accepted for signature stability (tokenization is
    span-local and does not consult it).
    """
    if not gold_spans and not pred_spans:
        return 1.0
    if not gold_spans or not pred_spans:
        return 0.0
    pred_counts = [Counter(tokenize(s)) for s in pred_spans]
    gold_counts = [Counter(tokenize(s)) for s in gold_spans]
    pairs = sorted(
        (
            (_pair_f1(p, g), pi, gi)
            for pi, p in enumerate(pred_counts)
            for gi, g in enumerate(gold_counts)
        ),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    used_pred: set[int] = set()
    used_gold: set[int] = set()
    matched = 0.0
    for f1, pi, gi in pairs:
        if f1 <= 0.0:
            break
        if pi in used_pred or gi in used_gold:
            continue
        used_pred.add(pi)
        used_gold.add(gi)
        matched += f1
    return matched / max(len(pred_spans), len(gold_spans))


def severity_macro_f1(pairs: list[tuple[str, str]], vocabulary: list[str] | None = None) -> float:
    """Macro-F1 over the labels that occur in refs or preds.

    Labels with zero TP, FP and FN (configured but absent) are excluded
    from the mean; per-label F1 with an empty denominator counts as 0.
    """
    if not pairs:
        raise EmptyInput("severity_macro_f1 needs at least one (pred, ref) pair")
    labels = sorted({p for p, _ in pairs} | {r for _, r in pairs})
    scores = []
    for label in labels:
        tp = sum(1 for p, r in pairs if p == label and r == label)
        fp = sum(1 for p, r in pairs if p == label and r != label)
        fn = sum(1 for p, r in pairs if p != label and r == label)
        if tp == 0 and fp == 0 and fn == 0:
            continue
        denom = 2 * tp + fp + fn
        scores.append((2.0 * tp / denom) if denom else 0.0)
    return sum(scores) / len(scores) if scores else 0.0


class EmbeddingCosineScorer:
    """Default rationale scorer: cosine of provider embeddings.

    Empty (or zero-embedding) texts follow the zero-norm rule and score 0.0.
    """

    def __init__(self, provider: EmbeddingProvider, cache: EmbeddingCache | None = None):
        self.provider = provider
        self.cache = cache if cache is not None else EmbeddingCache()

    def score(self, pred: str, gold: str) -> float:
        import numpy as np

        vectors = embed_batch([pred, gold], self.provider, self.cache)
        if not float(np.linalg.norm(vectors[0])) or not float(np.linalg.norm(vectors[1])):
            return 0.0
        return cosine_similarity(vectors[0], vectors[1])


class HttpScorer:
    """External scorer endpoint: POST {"candidate","reference"} -> {"f1": x}.

    Matches the BERTScore-style contract (two texts in, one F-measure out).
    """

    def __init__(self, url: str, timeout: float = 60.0, session=None):
        self.url = url
        self.timeout = timeout
        self.session = session or requests.Session()

    def score(self, pred: str, gold: str) -> float:
        try:
            resp = self.session.post(
                self.url,
                json={"candidate": pred, "reference": gold},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise ScorerUnavailable(f"scorer endpoint unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise ScorerUnavailable(f"scorer returned HTTP {resp.status_code}")
        body = resp.json()
        if "f1" not in body:
            raise ScorerUnavailable("scorer reply lacks an 'f1' field")
        return float(body["f1"])


def rationale_similarity(pred: str, gold: str, scorer) -> float:
    """Similarity of generated vs reference rationale.

    The empty-empty case is 1.0 by convention (mirrors the span rule) and is
    decided before the scorer runs; every other case goes to the scorer,
    including a literal empty string on one side.
    """
    if not pred and not gold:
        return 1.0
    return scorer.score(pred, gold)
