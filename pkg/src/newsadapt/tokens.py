"""Token estimation for context-budget guarding.

Exact tokenizers are model-specific external artifacts; budget checks only
need a conservative heuristic, so the default estimator is chars/4.
"""

from __future__ import annotations

from typing import Callable

TokenEstimator = Callable[[str], int]


def estimate_tokens(text: str) -> int:
    return (len(text) + 3) // 4
