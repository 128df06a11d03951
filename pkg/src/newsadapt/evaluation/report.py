"""Report emission: machine-readable summary plus human-readable tables.

Formatting is deterministic: fixed column orders, sorted keys, fixed float
precision. Regenerating from the same stored scores is byte-identical.
"""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

from newsadapt.evaluation.ab import AbReport
from newsadapt.evaluation.disparity import SubgroupSlice, alignment_disparity
from newsadapt.evaluation.metrics import severity_macro_f1
from newsadapt.evaluation.scoring import CellScore


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def summarize_scores(scores: list[CellScore]) -> list[dict]:
    """One row per (condition, model, language): mean span F1, severity
    Macro-F1, mean rationale similarity, parse failure rate."""
    groups: dict[tuple[str, str, str], list[CellScore]] = defaultdict(list)
    for score in scores:
        groups[(score.condition, score.model_id, score.language)].append(score)
    rows = []
    for (condition, model_id, language), cell_scores in sorted(groups.items()):
        n = len(cell_scores)
        rows.append(
            {
                "condition": condition,
                "model": model_id,
                "language": language,
                "cells": n,
                "severity_macro_f1": severity_macro_f1(
                    [(s.pred_label, s.ref_label) for s in cell_scores]
                ),
                "mean_span_f1": sum(s.span_f1 for s in cell_scores) / n,
                "mean_rationale_similarity": sum(
                    s.rationale_similarity for s in cell_scores
                )
                / n,
                "parse_failure_rate": sum(
                    1 for s in cell_scores if s.parse_status == "failed"
                )
                / n,
            }
        )
    return rows


def language_disparities(scores: list[CellScore]) -> list[SubgroupSlice]:
    """Default disparity slicing: per (condition, model), gap across languages."""
    groups: dict[tuple[str, str], dict[str, list[tuple[str, str]]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for score in scores:
        groups[(score.condition, score.model_id)][score.language].append(
            (score.pred_label, score.ref_label)
        )
    slices: list[SubgroupSlice] = []
    for (condition, model_id), by_language in sorted(groups.items()):
        if len(by_language) < 2:
            continue
        for piece in alignment_disparity(
            dict(by_language), grouping_key=f"language[{condition}|{model_id}]"
        ):
            slices.append(piece)
    return slices


def emit_report(
    scores: list[CellScore],
    disparities: list[SubgroupSlice] | None = None,
    ab_report: AbReport | None = None,
    out_dir: str | Path = ".",
) -> tuple[Path, Path]:
    """Write report.json and report.txt; returns both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if disparities is None:
        disparities = language_disparities(scores)
    rows = summarize_scores(scores)

    payload = {
        "rows": rows,
        "disparities": [s.to_dict() for s in disparities],
        "ab": ab_report.to_dict() if ab_report is not None else None,
        "total_cells": len(scores),
    }
    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    lines = ["evaluation report", "=================", ""]
    header = (
        f"{'condition':<10}{'model':<36}{'lang':<6}{'cells':>6}"
        f"{'sev-F1':>9}{'span-F1':>9}{'rat-sim':>9}{'fail%':>8}"
    )
    lines.append(header)
    lines.append("-" * len(header))
    for row in rows:
        lines.append(
            f"{row['condition']:<10}{row['model']:<36}{row['language']:<6}"
            f"{row['cells']:>6}"
            f"{_fmt(row['severity_macro_f1']):>9}"
            f"{_fmt(row['mean_span_f1']):>9}"
            f"{_fmt(row['mean_rationale_similarity']):>9}"
            f"{_fmt(row['parse_failure_rate']):>8}"
        )
    lines.append("")
    lines.append("alignment disparity (severity Macro-F1)")
    lines.append("---------------------------------------")
    if disparities:
        for piece in disparities:
            lines.append(
                f"{piece.grouping_key}: {piece.group_a} vs {piece.group_b}: "
                f"F1 {_fmt(piece.f1_a)} / {_fmt(piece.f1_b)}  delta={_fmt(piece.delta)}"
            )
    else:
        lines.append("(no subgroup slices)")
    lines.append("")
    if ab_report is not None:
        lines.append("blinded A/B ratings (1-4 Likert)")
        lines.append("--------------------------------")
        for condition in sorted(ab_report.per_condition):
            dims = ab_report.per_condition[condition]
            parts = ", ".join(
                f"{dim}={_fmt(dims[dim]['mean'])}±{_fmt(dims[dim]['sd'])}"
                for dim in ("overall", "grounding", "cultural_nuance", "nongeneric")
            )
            lines.append(f"{condition}: {parts}")
        win_text = ", ".join(f"{c}={n}" for c, n in sorted(ab_report.wins.items()))
        lines.append(f"wins on overall: {win_text or 'none'}; ties: {ab_report.ties}")
    else:
        lines.append("blinded A/B ratings: not collected in this run")
    text_path = out_dir / "report.txt"
    text_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return json_path, text_path
