"""The four controlled prompting conditions.

The grid is exact: two instruction languages crossed with three context
sources yield exactly these four cells and no others.
"""

from __future__ import annotations

from dataclasses import dataclass

INSTRUCTION_TARGET = "target"
INSTRUCTION_ENGLISH = "english"

CONTEXT_NONE = "none"
CONTEXT_STATIC = "static"
CONTEXT_RETRIEVED = "retrieved"


@dataclass(frozen=True)
class PromptCondition:
    name: str
    instruction_language: str
    context_source: str


B0 = PromptCondition("B0", INSTRUCTION_TARGET, CONTEXT_NONE)
B1 = PromptCondition("B1", INSTRUCTION_TARGET, CONTEXT_STATIC)
M1 = PromptCondition("M1", INSTRUCTION_ENGLISH, CONTEXT_RETRIEVED)
A1 = PromptCondition("A1", INSTRUCTION_TARGET, CONTEXT_RETRIEVED)

CONDITIONS: dict[str, PromptCondition] = {c.name: c for c in (B0, B1, M1, A1)}


def condition_grid() -> tuple[PromptCondition, ...]:
    return (B0, B1, M1, A1)


def get_condition(name: str) -> PromptCondition:
    try:
        return CONDITIONS[name]
    except KeyError:
        raise KeyError(
            f"unknown prompt condition {name!r}; expected one of {sorted(CONDITIONS)}"
        ) from None
