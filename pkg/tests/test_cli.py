"""End-to-end CLI flow on a small synthetic corpus."""

import json

import pytest
from click.testing import CliRunner

from newsadapt.cli import main

from helpers import corpus_jsonl, make_record, make_text
import random


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    rng = random.Random(5)
    records = []
    for lang in ("fa", "it"):
        for i in range(16):
            text = make_text(lang, rng, 12)
            article_id = f"{lang}-{i:03d}"
            words = text.split()
            records.append(
                make_record(
                    f"{article_id}-r1", article_id, lang, text,
                    label="Problematic" if i % 3 else "None",
                    severity=("Low", "Medium", "High")[i % 3] if i % 3 else None,
                    span_text=[" ".join(words[:2])] if i % 3 else [],
                    rationale=f"frames {words[0]} unfairly" if i % 3 else "",
                )
            )
    corpus = root / "corpus.jsonl"
    corpus.write_text(corpus_jsonl(records), encoding="utf-8")

    models = root / "models.json"
    models.write_text(
        json.dumps(
            [
                {"model_id": "mock/alpha", "context_budget": 200_000},
                {"model_id": "mock/beta", "context_budget": 200_000},
            ]
        ),
        encoding="utf-8",
    )
    return root


def run_cli(args):
    result = CliRunner().invoke(main, args, catch_exceptions=False)
    assert result.exit_code == 0, result.output
    return result


def test_full_cli_flow(workspace):
    split_dir = workspace / "split"
    run_cli(
        [
            "ingest", "--corpus", str(workspace / "corpus.jsonl"),
            "--holdout", "fa=4,it=4", "--seed", "7", "--out", str(split_dir),
        ]
    )
    assert (split_dir / "bank.jsonl").exists()
    report = json.loads((split_dir / "report.json").read_text())
    assert report["test_size"] == 8

    bank_path = workspace / "bank.nab"
    run_cli(["build-bank", "--split", str(split_dir), "--out", str(bank_path)])
    assert bank_path.exists()

    test_rows = [
        json.loads(line)
        for line in (split_dir / "test.jsonl").read_text().splitlines()
    ]
    query_id = test_rows[0]["article_id"]
    out = run_cli(
        ["retrieve", "--bank", str(bank_path), "--query-id", query_id,
         "--k", "3", "--split", str(split_dir)]
    )
    assert len(out.output.strip().splitlines()) >= 3

    rendered = run_cli(
        ["render", "--condition", "M1", "--article-id", query_id,
         "--bank", str(bank_path), "--k", "2", "--split", str(split_dir)]
    )
    assert "Example:" in rendered.output
    assert "Item to assess:" in rendered.output

    run_dir = workspace / "run"
    run_cli(
        ["run", "--split", str(split_dir), "--bank", str(bank_path),
         "--models", str(workspace / "models.json"), "--k", "2",
         "--out", str(run_dir), "--provider", "mock"]
    )
    lines = (run_dir / "results.jsonl").read_text().strip().splitlines()
    assert len(lines) == 8 * 4 * 2  # items x conditions x models

    eval_dir = workspace / "eval"
    run_cli(
        ["evaluate", "--run", str(run_dir), "--split", str(split_dir),
         "--out", str(eval_dir)]
    )
    report = json.loads((eval_dir / "report.json").read_text())
    assert len(report["rows"]) == 4 * 2 * 2

    ab_dir = workspace / "ab"
    run_cli(
        ["assignments", "--split", str(split_dir), "--evaluators", "fa=2,it=2",
         "--pair", "B1:M1", "--seed", "3", "--out", str(ab_dir),
         "--run", str(run_dir), "--model", "mock/alpha"]
    )
    export_lines = (ab_dir / "ab_export.jsonl").read_text().strip().splitlines()
    assert len(export_lines) == 8
    blob = "".join(export_lines)
    assert '"condition"' not in blob and "mock/alpha" not in blob

    # fabricate completed ratings in the export layout, then aggregate
    ratings_path = workspace / "ratings.jsonl"
    with open(ratings_path, "w", encoding="utf-8") as fh:
        for line in export_lines:
            row = json.loads(line)
            fh.write(
                json.dumps(
                    {
                        "evaluator_id": row["evaluator_id"],
                        "item_id": row["item_id"],
                        "left": {"overall": 3, "grounding": 3,
                                 "cultural_nuance": 2, "nongeneric": 3},
                        "right": {"overall": 2, "grounding": 2,
                                  "cultural_nuance": 2, "nongeneric": 1},
                    }
                )
                + "\n"
            )
    out = run_cli(
        ["ab-report", "--ratings", str(ratings_path),
         "--provenance", str(ab_dir / "ab_provenance.json"),
         "--out", str(workspace / "ab_report.json")]
    )
    payload = json.loads((workspace / "ab_report.json").read_text())
    assert set(payload["per_condition"]) == {"B1", "M1"}
    assert payload["items_rated"] == 8
