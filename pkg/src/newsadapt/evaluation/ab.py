"""Blinded A/B rationale rating: assignment building, blinded export,
rating import, and unblinded aggregation.

Evaluators never see condition, model, or placement provenance; the
provenance map is written to a separate file that only the aggregation step
reads.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

RATING_DIMENSIONS = ("overall", "grounding", "cultural_nuance", "nongeneric")

# Keys that must never appear in the evaluator-facing export.
FORBIDDEN_EXPORT_KEYS = ("condition", "model", "provenance", "placement")


class IndivisiblePartition(ValueError):
    pass


class OrphanRating(KeyError):
    pass


class IncompleteItem(ValueError):
    pass


@dataclass
class AbAssignment:
    evaluator_id: str
    language: str
    item_ids: list[str]
    # item_id -> {"left": condition, "right": condition}; never exported to evaluators
    placements: dict[str, dict[str, str]]
    seed: int

    def to_dict(self) -> dict:
        return {
            "evaluator_id": self.evaluator_id,
            "language": self.language,
            "item_ids": list(self.item_ids),
            "placements": {k: dict(v) for k, v in self.placements.items()},
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "AbAssignment":
        return cls(
            evaluator_id=row["evaluator_id"],
            language=row["language"],
            item_ids=list(row["item_ids"]),
            placements={k: dict(v) for k, v in row["placements"].items()},
            seed=int(row["seed"]),
        )


@dataclass
class SideScores:
    overall: int
    grounding: int
    cultural_nuance: int
    nongeneric: int

    def __post_init__(self):
        for dim in RATING_DIMENSIONS:
            value = getattr(self, dim)
            if not isinstance(value, int) or isinstance(value, bool) or not 1 <= value <= 4:
                raise IncompleteItem(
                    f"score {dim}={value!r} outside the 1..4 Likert range"
                )

    def to_dict(self) -> dict:
        return {dim: getattr(self, dim) for dim in RATING_DIMENSIONS}

    @classmethod
    def from_dict(cls, row: dict) -> "SideScores":
        missing = [dim for dim in RATING_DIMENSIONS if row.get(dim) is None]
        if missing:
            raise IncompleteItem(f"missing scores: {missing}")
        return cls(**{dim: row[dim] for dim in RATING_DIMENSIONS})


@dataclass
class AbRating:
    evaluator_id: str
    item_id: str
    left: SideScores
    right: SideScores
    comment: str = ""

    def to_dict(self) -> dict:
        return {
            "evaluator_id": self.evaluator_id,
            "item_id": self.item_id,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "comment": self.comment,
        }

    @classmethod
    def from_dict(cls, row: dict) -> "AbRating":
        for side in ("left", "right"):
            if not isinstance(row.get(side), dict):
                raise IncompleteItem(f"rating for item {row.get('item_id')!r} lacks {side} side")
        return cls(
            evaluator_id=row["evaluator_id"],
            item_id=row["item_id"],
            left=SideScores.from_dict(row["left"]),
            right=SideScores.from_dict(row["right"]),
            comment=row.get("comment", ""),
        )


def build_ab_assignments(
    items_by_language: dict[str, list[str]],
    evaluators_per_language: dict[str, int],
    condition_pair: tuple[str, str],
    seed: int,
) -> list[AbAssignment]:
    """Disjoint exact cover per language with randomized left/right placement.

    Each language draws from its own seeded stream; evaluator item sets are
    pairwise disjoint and exhaust the language's item list.
    """
    assignments: list[AbAssignment] = []
    for language in sorted(evaluators_per_language):
        n_evaluators = evaluators_per_language[language]
        item_ids = sorted(items_by_language.get(language, []))
        if n_evaluators < 1 or not item_ids:
            raise IndivisiblePartition(
                f"language {language!r}: {len(item_ids)} items for "
                f"{n_evaluators} evaluators"
            )
        if len(item_ids) % n_evaluators != 0:
            raise IndivisiblePartition(
                f"language {language!r}: {len(item_ids)} items not divisible "
                f"by {n_evaluators} evaluators"
            )
        per_evaluator = len(item_ids) // n_evaluators
        rng = random.Random(f"{seed}:ab:{language}")
        shuffled = list(item_ids)
        rng.shuffle(shuffled)
        for i in range(n_evaluators):
            chunk = shuffled[i * per_evaluator : (i + 1) * per_evaluator]
            placements = {}
            for item_id in chunk:
                flip = rng.random() < 0.5
                left, right = (condition_pair if flip else condition_pair[::-1])
                placements[item_id] = {"left": left, "right": right}
            assignments.append(
                AbAssignment(
                    evaluator_id=f"{language}-e{i + 1:02d}",
                    language=language,
                    item_ids=chunk,
                    placements=placements,
                    seed=seed,
                )
            )
    return assignments


def export_for_evaluators(
    assignments: list[AbAssignment],
    item_texts: dict[str, str],
    rationales: dict[tuple[str, str], str] | None = None,
) -> list[dict]:
    """Evaluator-facing records: item text plus two anonymized rationales.

    `rationales` maps (item_id, condition) to rationale text; sides are
    resolved through the hidden placement and then emitted only as
    left/right. No condition, model, or provenance field is serialized.
    """
    rows = []
    for assignment in assignments:
        for item_id in assignment.item_ids:
            placement = assignment.placements[item_id]
            left_text = right_text = ""
            if rationales is not None:
                left_text = rationales.get((item_id, placement["left"]), "")
                right_text = rationales.get((item_id, placement["right"]), "")
            rows.append(
                {
                    "evaluator_id": assignment.evaluator_id,
                    "language": assignment.language,
                    "item_id": item_id,
                    "item_text": item_texts.get(item_id, ""),
                    "left_rationale": left_text,
                    "right_rationale": right_text,
                    "scores": {
                        "left": {dim: None for dim in RATING_DIMENSIONS},
                        "right": {dim: None for dim in RATING_DIMENSIONS},
                    },
                    "comment": "",
                }
            )
    return rows


def provenance_map(assignments: list[AbAssignment]) -> dict[str, dict[str, str]]:
    """item_id -> {"left": condition, "right": condition}; aggregation-only."""
    out: dict[str, dict[str, str]] = {}
    for assignment in assignments:
        for item_id, placement in assignment.placements.items():
            out[item_id] = dict(placement)
    return out


def write_jsonl(rows: list[dict], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def read_ratings(path: str | Path) -> list[AbRating]:
    ratings = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            scores = row.get("scores")
            if scores and "left" not in row:
                row = {**row, "left": scores.get("left"), "right": scores.get("right")}
            ratings.append(AbRating.from_dict(row))
    return ratings


def _mean_sd(values: list[float]) -> tuple[float, float]:
    mean = sum(values) / len(values)
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    return mean, math.sqrt(variance)


@dataclass
class AbReport:
    condition_pair: tuple[str, str]
    per_condition: dict[str, dict[str, dict[str, float]]]  # cond -> dim -> {mean, sd, n}
    wins: dict[str, int]
    ties: int
    items_rated: int
    per_language: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    per_subgroup: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "condition_pair": list(self.condition_pair),
            "per_condition": self.per_condition,
            "wins": dict(sorted(self.wins.items())),
            "ties": self.ties,
            "items_rated": self.items_rated,
            "per_language": self.per_language,
            "per_subgroup": self.per_subgroup,
        }


def aggregate_ab_ratings(
    ratings: list[AbRating],
    provenance: dict[str, dict[str, str]],
    languages: dict[str, str] | None = None,
    evaluator_meta: dict[str, dict[str, str]] | None = None,
) -> AbReport:
    """Unblind ratings through the provenance map and aggregate.

    Produces per-condition mean and sd for overall plus each sub-dimension,
    per-item win/tie/loss on overall, and optional per-language and
    per-evaluator-subgroup overall breakdowns.
    """
    if not ratings:
        raise IncompleteItem("no ratings to aggregate")
    by_condition: dict[str, dict[str, list[float]]] = {}
    by_language: dict[str, dict[str, list[float]]] = {}
    by_subgroup: dict[str, dict[str, list[float]]] = {}
    conditions: set[str] = set()
    wins: dict[str, int] = {}
    ties = 0

    for rating in ratings:
        placement = provenance.get(rating.item_id)
        if placement is None:
            raise OrphanRating(
                f"rating for item {rating.item_id!r} matches no assignment"
            )
        sides = {"left": rating.left, "right": rating.right}
        scored: dict[str, SideScores] = {}
        for side, scores in sides.items():
            condition = placement[side]
            conditions.add(condition)
            scored[condition] = scores
            bucket = by_condition.setdefault(condition, {d: [] for d in RATING_DIMENSIONS})
            for dim in RATING_DIMENSIONS:
                bucket[dim].append(float(getattr(scores, dim)))
            if languages is not None and rating.item_id in languages:
                lang_bucket = by_language.setdefault(languages[rating.item_id], {})
                lang_bucket.setdefault(condition, []).append(float(scores.overall))
            if evaluator_meta is not None and rating.evaluator_id in evaluator_meta:
                for key, value in sorted(evaluator_meta[rating.evaluator_id].items()):
                    group = f"{key}={value}"
                    sub_bucket = by_subgroup.setdefault(group, {})
                    sub_bucket.setdefault(condition, []).append(float(scores.overall))

        cond_list = sorted(scored)
        if len(cond_list) == 2:
            a, b = cond_list
            if scored[a].overall > scored[b].overall:
                wins[a] = wins.get(a, 0) + 1
            elif scored[b].overall > scored[a].overall:
                wins[b] = wins.get(b, 0) + 1
            else:
                ties += 1

    per_condition = {
        cond: {
            dim: dict(zip(("mean", "sd", "n"), (*_mean_sd(vals), float(len(vals)))))
            for dim, vals in dims.items()
        }
        for cond, dims in by_condition.items()
    }

    def _overall_stats(buckets: dict[str, dict[str, list[float]]]):
        return {
            group: {
                cond: dict(zip(("mean", "sd", "n"), (*_mean_sd(vals), float(len(vals)))))
                for cond, vals in sorted(conds.items())
            }
            for group, conds in sorted(buckets.items())
        }

    pair = tuple(sorted(conditions))
    if len(pair) == 1:
        pair = (pair[0], pair[0])
    return AbReport(
        condition_pair=pair[:2],  # type: ignore[arg-type]
        per_condition=per_condition,
        wins=wins,
        ties=ties,
        items_rated=len(ratings),
        per_language=_overall_stats(by_language),
        per_subgroup=_overall_stats(by_subgroup),
    )
