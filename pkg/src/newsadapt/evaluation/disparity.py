"""Alignment disparity: absolute severity-F1 gaps between subgroups."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from newsadapt.evaluation.metrics import severity_macro_f1


class MissingGroup(KeyError):
    pass


@dataclass
class SubgroupSlice:
    grouping_key: str
    group_a: str
    group_b: str
    metric: str
    f1_a: float
    f1_b: float

    @property
    def delta(self) -> float:
        return disparity_delta(self.f1_a, self.f1_b)

    def to_dict(self) -> dict:
        return {
            "grouping_key": self.grouping_key,
            "group_a": self.group_a,
            "group_b": self.group_b,
            "metric": self.metric,
            "f1_a": self.f1_a,
            "f1_b": self.f1_b,
            "delta": self.delta,
        }


def disparity_delta(f1_a: float, f1_b: float) -> float:
    """|F1_A - F1_B|, rounded at 1e-12 so decimal fixture arithmetic
    (e.g. |0.44 - 0.37| = 0.07) is exact; far below metric resolution."""
    return abs(round(f1_a - f1_b, 12))


def alignment_disparity(
    slices: dict[str, list[tuple[str, str]]],
    grouping_key: str = "group",
    pairings: list[tuple[str, str]] | None = None,
    vocabulary: list[str] | None = None,
) -> list[SubgroupSlice]:
    """Per-group severity Macro-F1 plus the gap for each group pairing.

    `slices` maps group id to its (pred, ref) label pairs; pairings default
    to every unordered pair of groups in sorted order.
    """
    if len(slices) < 2:
        raise MissingGroup("alignment disparity needs at least two groups")
    f1 = {}
    for group, pairs in slices.items():
        if not pairs:
            raise MissingGroup(f"group {group!r} has no scored pairs")
        f1[group] = severity_macro_f1(pairs, vocabulary)
    if pairings is None:
        pairings = list(combinations(sorted(slices), 2))
    out = []
    for a, b in pairings:
        if a not in f1 or b not in f1:
            missing = a if a not in f1 else b
            raise MissingGroup(f"group {missing!r} not present in slices")
        out.append(
            SubgroupSlice(
                grouping_key=grouping_key,
                group_a=a,
                group_b=b,
                metric="severity_macro_f1",
                f1_a=f1[a],
                f1_b=f1[b],
            )
        )
    return out
