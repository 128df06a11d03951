"""Acceptance suite: one test per criterion, each at its stated tolerance.

The conftest hook prints one [ACCEPTANCE] pass/fail line per test in the
terminal summary.
"""

import io
import json
import random
import time

import pytest

from newsadapt.bank.embedding import EmbeddingCache, HashedNgramProvider, embed_batch
from newsadapt.bank.retrieval import cosine_similarity, retrieve
from newsadapt.bank.store import build_bank
from newsadapt.curation.admission import ContaminationAttempt, rebuild_bank_with_admissions
from newsadapt.bank.types import Exemplar
from newsadapt.evaluation.ab import build_ab_assignments, export_for_evaluators
from newsadapt.evaluation.disparity import disparity_delta
from newsadapt.evaluation.metrics import EmbeddingCosineScorer, severity_macro_f1, span_f1
from newsadapt.evaluation.report import emit_report, summarize_scores
from newsadapt.evaluation.scoring import score_cells
from newsadapt.gateway.cache import GenerationCache
from newsadapt.gateway.config import ModelConfig
from newsadapt.gateway.runner import run_matrix, write_matrix
from newsadapt.gateway.transport import MockChatTransport
from newsadapt.ingest.formats import CorpusFormat
from newsadapt.ingest.pipeline import build_master_table
from newsadapt.prompting.conditions import condition_grid, get_condition
from newsadapt.prompting.templates import TemplateStore

from helpers import build_test_bank, corpus_jsonl, make_record, make_text, synthetic_articles
from test_pipeline import naive_master_table
from test_retrieval import brute_force_rank, naive_cosine
import test_curation_machine as machine_traces

VOCAB = ["Low", "Medium", "High"]


# --- criterion: pipeline oracle ----------------------------------------------

def acceptance_corpus(n_articles=50):
    """50 articles, ≤4 annotators each, covering every cleaning case:
    NA records, missing fields, binary conflicts, severity conflicts with
    equal and with unequal rationale lengths."""
    rng = random.Random(2024)
    records = []
    for i in range(n_articles):
        article_id = f"acc-{i:03d}"
        text = make_text("fa", rng, 14)
        span = [text.split()[0]]
        case = i % 10
        if case == 0:  # NA annotation alongside a usable one
            records.append(make_record(f"{article_id}-r0", article_id, "fa", text,
                                       label="NA", severity=None, rationale=""))
            records.append(make_record(f"{article_id}-r1", article_id, "fa", text,
                                       span_text=span))
        elif case == 1:  # missing-field rejections
            records.append(make_record(f"{article_id}-r0", article_id, "fa", text,
                                       rationale=""))
            records.append(make_record(f"{article_id}-r1", article_id, "fa", text,
                                       span_text=[]))
            records.append(make_record(f"{article_id}-r2", article_id, "fa", text,
                                       severity=None))
        elif case == 2:  # binary conflict: excluded at the article level
            records.append(make_record(f"{article_id}-r0", article_id, "fa", text,
                                       label="None"))
            records.append(make_record(f"{article_id}-r1", article_id, "fa", text,
                                       span_text=span))
        elif case == 3:  # severity conflict, unequal rationale lengths
            records.append(make_record(f"{article_id}-r0", article_id, "fa", text,
                                       severity="Low", span_text=span,
                                       rationale="x" * 40))
            records.append(make_record(f"{article_id}-r1", article_id, "fa", text,
                                       severity="High", span_text=span,
                                       rationale="y" * 90))
        elif case == 4:  # severity conflict, equal rationale lengths
            records.append(make_record(f"{article_id}-rB", article_id, "fa", text,
                                       severity="Medium", span_text=span,
                                       rationale="z" * 60))
            records.append(make_record(f"{article_id}-rA", article_id, "fa", text,
                                       severity="High", span_text=span,
                                       rationale="w" * 60))
        elif case == 5:  # uncontested None pair
            records.append(make_record(f"{article_id}-r0", article_id, "fa", text,
                                       label="None"))
            records.append(make_record(f"{article_id}-r1", article_id, "fa", text,
                                       label="None"))
        else:  # plain articles, 1-4 annotators, random usable annotations
            for j in range(rng.randint(1, 4)):
                records.append(
                    make_record(
                        f"{article_id}-r{j}", article_id, "fa", text,
                        severity=rng.choice(VOCAB), span_text=span,
                        rationale="r" * rng.randint(10, 120),
                    )
                )
    return records


def test_pipeline_oracle_on_synthetic_corpus():
    records = acceptance_corpus(50)
    fmt = CorpusFormat(severity_vocabulary=VOCAB)
    body = corpus_jsonl(records).encode("utf-8")

    started = time.perf_counter()
    split, report = build_master_table(io.BytesIO(body), fmt, holdout={}, seed=0)
    elapsed = time.perf_counter() - started

    got = sorted(split.bank + split.test, key=lambda a: a.article_id)
    expected = naive_master_table(
        [r for r in records], VOCAB
    )
    assert got == expected, "pipeline output diverges from the naive reference"
    assert elapsed < 1.0, f"pipeline took {elapsed:.3f}s (budget 1s)"
    # the corpus really exercises every case
    assert report.rejected_by_reason["NotApplicable"] >= 1
    assert report.rejected_by_reason["MissingRationale"] >= 1
    assert report.binary_conflict_articles >= 1
    assert report.severity_conflict_articles >= 1


# --- criterion: retrieval oracle ----------------------------------------------

def test_retrieval_oracle_100_random_banks():
    rng = random.Random(7)
    checked_pairs = 0
    for trial in range(100):
        pool_size = rng.randint(2, 200)
        articles = synthetic_articles(pool_size, "fa", seed=5000 + trial)
        bank, provider = build_test_bank(articles, dim=64)
        cache = EmbeddingCache()
        query = synthetic_articles(1, "fa", seed=9000 + trial, prefix="query")[0]

        query_vec = embed_batch([query.article_text], provider, cache)[0]
        oracle = brute_force_rank(query_vec, bank.exemplars, query.article_id)
        for k in (1, 3, 10):
            result = retrieve(query, bank, provider, k, cache=cache)
            assert result.exemplar_ids() == [aid for _, aid in oracle[:k]]
            assert query.article_id not in result.exemplar_ids()
            for (ex, score), (oracle_score, _) in zip(result.items, oracle):
                assert abs(score - oracle_score) <= 1e-9

        # cosine vs naive summation on a sampled pair
        a, b = bank.exemplars[0].embedding, bank.exemplars[-1].embedding
        assert abs(cosine_similarity(a, b) - naive_cosine(a, b)) <= 1e-9
        checked_pairs += 1

        # adversarial dedup guard: query injected into the pool
        injected = articles[rng.randrange(pool_size)]
        self_query = synthetic_articles(1, "fa", seed=5000 + trial, prefix="x")[0]
        self_query.article_id = injected.article_id
        self_query.article_text = injected.article_text
        if pool_size > 1:
            res = retrieve(self_query, bank, provider, 3, cache=cache)
            assert injected.article_id not in res.exemplar_ids()
    assert checked_pairs == 100


# --- criterion: metric fixtures -------------------------------------------------

def test_metric_fixtures():
    assert span_f1([], []) == 1.0
    assert span_f1(["a span"], []) == 0.0
    assert span_f1([], ["a span"]) == 0.0
    pairs = [("A", "A"), ("B", "A"), ("B", "B")]
    assert severity_macro_f1(pairs, ["A", "B"]) == pytest.approx(0.6667, abs=1e-4)
    assert severity_macro_f1(pairs, ["A", "B"]) == pytest.approx(2 / 3, abs=1e-9)
    assert disparity_delta(0.44, 0.37) == 0.07
    assert disparity_delta(0.36, 0.47) == 0.11


# --- criterion: condition grid ---------------------------------------------------

def test_condition_grid_and_context_equality():
    cells = {
        (c.name, c.instruction_language, c.context_source) for c in condition_grid()
    }
    assert cells == {
        ("B0", "target", "none"),
        ("B1", "target", "static"),
        ("M1", "english", "retrieved"),
        ("A1", "target", "retrieved"),
    }

    articles = synthetic_articles(20, "it", seed=77)
    bank, provider = build_test_bank(articles)
    templates = TemplateStore.defaults(severity_vocabulary=VOCAB)
    from newsadapt.prompting.assemble import assemble_prompt

    for seed in range(5):
        item = synthetic_articles(1, "it", seed=800 + seed, prefix="probe")[0]
        context = retrieve(item, bank, provider, k=3)
        m1 = assemble_prompt("M1", item, context=context, templates=templates)
        a1 = assemble_prompt("A1", item, context=context, templates=templates)
        assert m1.injected_exemplar_ids == a1.injected_exemplar_ids
        assert item.article_id not in m1.injected_exemplar_ids


# --- criterion: pilot-scale end-to-end -------------------------------------------

def pilot_corpus():
    """2 languages x 200 articles (100 bank + 100 held-out after split)."""
    records = []
    rng = random.Random(99)
    for lang in ("fa", "it"):
        for i in range(200):
            article_id = f"{lang}-{i:04d}"
            text = make_text(lang, rng, 10 + rng.randrange(10))
            words = text.split()
            problematic = rng.random() < 0.7
            records.append(
                make_record(
                    f"{article_id}-r1", article_id, lang, text,
                    label="Problematic" if problematic else "None",
                    severity=rng.choice(VOCAB) if problematic else None,
                    span_text=[" ".join(words[:2])] if problematic else [],
                    rationale=f"frames {words[0]} against {words[-1]}"
                    if problematic else "",
                )
            )
    return records


def test_pilot_scale_end_to_end_mock(tmp_path):
    started = time.perf_counter()
    fmt = CorpusFormat(severity_vocabulary=VOCAB)
    body = corpus_jsonl(pilot_corpus()).encode("utf-8")
    split, _ = build_master_table(io.BytesIO(body), fmt, {"fa": 100, "it": 100}, seed=1)
    assert len(split.test) == 200

    provider = HashedNgramProvider(dim=256, n=3)
    emb_cache = EmbeddingCache()
    bank = build_bank(split.bank, provider, emb_cache)
    templates = TemplateStore.defaults(severity_vocabulary=VOCAB)
    models = [
        ModelConfig(model_id="mock/llama-4-maverick", context_budget=1_050_000),
        ModelConfig(model_id="mock/mixtral-8x22b", context_budget=65_500),
    ]
    cache = GenerationCache(tmp_path / "generations.jsonl")
    result = run_matrix(
        items=split.test,
        conditions=list(condition_grid()),
        models=models,
        bank=bank,
        provider=provider,
        templates=templates,
        k=3,
        transport=MockChatTransport(vocabulary=VOCAB),
        cache=cache,
        concurrency=4,
        embedding_cache=emb_cache,
    )
    assert len(result.cells) == 200 * 4 * 2 == 1600
    assert result.failures == []
    first_path = write_matrix(result, tmp_path / "run1")

    # rerun against the warm cache: byte-identical output, zero provider calls
    transport2 = MockChatTransport(vocabulary=VOCAB)
    rerun = run_matrix(
        items=split.test, conditions=list(condition_grid()), models=models,
        bank=bank, provider=provider, templates=templates, k=3,
        transport=transport2, cache=GenerationCache(tmp_path / "generations.jsonl"),
        concurrency=4, embedding_cache=emb_cache,
    )
    second_path = write_matrix(rerun, tmp_path / "run2")
    assert transport2.calls == 0
    assert first_path.read_bytes() == second_path.read_bytes()

    # report over all cells: 4 conditions x 2 models x 2 languages rows
    scorer = EmbeddingCosineScorer(provider, emb_cache)
    references = {a.article_id: a for a in split.test}
    scores = score_cells(result.cells, references, scorer)
    rows = summarize_scores(scores)
    assert len(rows) == 16
    assert {(r["condition"], r["model"], r["language"]) for r in rows} == {
        (c.name, m.model_id, lang)
        for c in condition_grid()
        for m in models
        for lang in ("fa", "it")
    }
    emit_report(scores, out_dir=tmp_path / "report")
    assert (tmp_path / "report" / "report.json").exists()

    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"pilot end-to-end took {elapsed:.1f}s (budget 60s)"


# --- criterion: assignment properties ----------------------------------------------

def test_assignment_partition_and_blinding():
    items = {
        "fa": [f"fa-{i:03d}" for i in range(100)],
        "it": [f"it-{i:03d}" for i in range(100)],
    }
    assignments = build_ab_assignments(items, {"fa": 5, "it": 5}, ("B1", "M1"), seed=11)
    for lang in ("fa", "it"):
        per_lang = [a for a in assignments if a.language == lang]
        assert len(per_lang) == 5
        union = set()
        for a in per_lang:
            assert len(a.item_ids) == 20
            assert not (set(a.item_ids) & union)
            union |= set(a.item_ids)
        assert union == set(items[lang])

    rows = export_for_evaluators(
        assignments,
        item_texts={i: f"text {i}" for lang in items for i in items[lang]},
        rationales={
            (i, c): f"rationale-{c}-{i}"
            for lang in items for i in items[lang] for c in ("B1", "M1")
        },
    )
    blob = json.dumps(rows, ensure_ascii=False)
    for forbidden in ("condition", "model", "provenance", "placement", '"B1"', '"M1"'):
        assert forbidden not in blob, f"blinded export leaks {forbidden!r}"


# --- criterion: curation state machine ----------------------------------------------

def test_curation_state_machine_exhaustive_and_contamination_fuzz():
    # exhaustive call-sequence enumeration (≤ 6 steps) with the safety
    # property checked at every admission
    machine_traces.test_exhaustive_traces_admit_only_with_agreement_or_adjudication()

    # randomized admission fuzz: every attempt to admit a test-set article
    # raises ContaminationAttempt
    articles = synthetic_articles(10, "fa", seed=404)
    bank, provider = build_test_bank(articles)
    rng = random.Random(31337)
    test_ids = {f"held-{i:04d}" for i in range(250)}
    test_list = sorted(test_ids)
    for trial in range(1000):
        victim = rng.choice(test_list)
        ex = Exemplar(
            article_id=victim,
            language=rng.choice(["fa", "it"]),
            text=make_text("fa", rng, rng.randint(3, 15)),
            spans=[],
            severity=rng.choice([None, "Low", "High"]),
            rationale="",
        )
        with pytest.raises(ContaminationAttempt):
            rebuild_bank_with_admissions(bank, [ex], provider, test_ids)
