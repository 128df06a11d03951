"""Metric tests: fixtures computed by independent oracles, plus properties."""

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newsadapt.bank.embedding import HashedNgramProvider
from newsadapt.evaluation.metrics import (
    EmbeddingCosineScorer,
    EmptyInput,
    rationale_similarity,
    severity_macro_f1,
    span_f1,
    tokenize,
)

VOCAB = ["Low", "Medium", "High"]


# --- independent confusion-matrix oracle ------------------------------------

def brute_force_macro_f1(pairs):
    labels = set()
    for p, r in pairs:
        labels.add(p)
        labels.add(r)
    per_label = []
    for label in labels:
        tp = fp = fn = 0
        for p, r in pairs:
            if p == label and r == label:
                tp += 1
            elif p == label and r != label:
                fp += 1
            elif p != label and r == label:
                fn += 1
        if tp + fp + fn == 0:
            continue
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        if precision + recall == 0:
            per_label.append(0.0)
        else:
            per_label.append(2 * precision * recall / (precision + recall))
    return sum(per_label) / len(per_label)


def test_macro_f1_fixture():
    pairs = list(zip(["A", "B", "B"], ["A", "A", "B"]))  # (pred, ref)
    oracle = brute_force_macro_f1(pairs)
    assert oracle == pytest.approx(2 / 3, abs=1e-12)
    assert severity_macro_f1(pairs, ["A", "B"]) == pytest.approx(0.6667, abs=1e-4)
    assert severity_macro_f1(pairs, ["A", "B"]) == pytest.approx(oracle, abs=1e-9)


def test_macro_f1_perfect_and_single_wrong():
    assert severity_macro_f1([("A", "A"), ("B", "B")], VOCAB) == 1.0
    assert severity_macro_f1([("A", "B")], VOCAB) == 0.0


def test_macro_f1_ignores_absent_vocabulary_labels():
    # "High" never occurs; the mean is over occurring labels only
    pairs = [("Low", "Low"), ("Medium", "Low")]
    assert severity_macro_f1(pairs, VOCAB) == pytest.approx(
        brute_force_macro_f1(pairs), abs=1e-12
    )


def test_macro_f1_empty_input():
    with pytest.raises(EmptyInput):
        severity_macro_f1([], VOCAB)


@settings(max_examples=80, deadline=None)
@given(
    st.lists(
        st.tuples(st.sampled_from("ABCD"), st.sampled_from("ABCD")),
        min_size=1,
        max_size=100,
    )
)
def test_macro_f1_matches_oracle(pairs):
    assert severity_macro_f1(pairs) == pytest.approx(
        brute_force_macro_f1(pairs), abs=1e-9
    )


# --- span F1 -----------------------------------------------------------------

def test_span_f1_empty_rules():
    assert span_f1([], []) == 1.0
    assert span_f1(["x"], []) == 0.0
    assert span_f1([], ["x"]) == 0.0


def test_span_f1_partial_overlap_hand_oracle():
    # P = 2/2, R = 2/4, F1 = 2*1*0.5/1.5 = 2/3
    assert span_f1(["a b"], ["a b c d"]) == pytest.approx(0.6667, abs=1e-4)
    assert span_f1(["a b"], ["a b c d"]) == pytest.approx(2 / 3, abs=1e-9)


def test_span_f1_exact_match():
    assert span_f1(["shared words here"], ["shared words here"]) == 1.0


def test_span_f1_multiset_tokens():
    # pred has "a" once, gold twice: overlap 1, P=1, R=1/2
    assert span_f1(["a"], ["a a"]) == pytest.approx(2 / 3, abs=1e-9)


def test_span_f1_greedy_best_match_no_reuse():
    pred = ["uno due", "tre quattro"]
    gold = ["uno due", "tre quattro"]
    assert span_f1(pred, gold) == 1.0
    # one predicted span cannot satisfy two golds
    assert span_f1(["uno due"], ["uno due", "uno due"]) == pytest.approx(0.5)


def test_span_f1_overgeneration_penalized():
    assert span_f1(["uno due", "spurio extra"], ["uno due"]) == pytest.approx(0.5)


def test_span_f1_casefold_only_where_script_has_case():
    assert span_f1(["Governo Italiano"], ["governo italiano"]) == 1.0
    assert span_f1(["تحریم نفتی"], ["تحریم نفتی"]) == 1.0


def test_tokenize_nfc_and_whitespace():
    assert tokenize("Café  aperto") == ["café", "aperto"]


@settings(max_examples=80, deadline=None)
@given(
    st.lists(st.text("ab ", min_size=1, max_size=8), min_size=0, max_size=4),
    st.lists(st.text("ab ", min_size=1, max_size=8), min_size=0, max_size=4),
)
def test_span_f1_bounded(pred, gold):
    score = span_f1(pred, gold)
    assert 0.0 <= score <= 1.0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["a b", "c d", "e f", "g h"]), min_size=2, max_size=4))
def test_span_f1_monotone_adding_matching_span(gold):
    # |pred| < |gold|: adding a span that matches an unmatched gold span
    # never lowers the score
    pred = gold[:1]
    before = span_f1(pred, gold)
    after = span_f1(gold[:2], gold)
    assert after >= before - 1e-12


# --- rationale similarity ----------------------------------------------------

@pytest.fixture(scope="module")
def scorer():
    return EmbeddingCosineScorer(HashedNgramProvider(dim=128, n=3))


def test_rationale_identical_texts(scorer):
    text = "the article scapegoats foreign actors"
    assert rationale_similarity(text, text, scorer) == pytest.approx(1.0, abs=1e-9)


def test_rationale_empty_empty_convention(scorer):
    assert rationale_similarity("", "", scorer) == 1.0


def test_rationale_empty_pred_nonempty_gold(scorer):
    assert rationale_similarity("", "justified by the text", scorer) == 0.0


def test_rationale_related_texts_in_unit_range(scorer):
    a = "blames sanctions for domestic economic trouble"
    b = "attributes economic trouble to foreign sanctions"
    score = rationale_similarity(a, b, scorer)
    assert 0.0 < score < 1.0
