"""Access to the measured implied constants in data/constants.json."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load_constants() -> dict:
    text = resources.files("gapsums").joinpath("data/constants.json").read_text()
    return json.loads(text)


def counting_constant(r: int) -> float:
    """K_r: count_solutions_exact <= K_r * solution_bound on the measured family."""
    try:
        return float(load_constants()["K"][str(r)])
    except KeyError:
        raise KeyError(f"no measured counting constant for r={r}") from None


def l1_constant(r: int, s: int) -> float:
    """C_{r,s}: l1_norm <= C_{r,s} * l1_bound on the measured family."""
    try:
        return float(load_constants()["C"][f"{r},{s}"])
    except KeyError:
        raise KeyError(f"no measured l1 constant for r={r}, s={s}") from None
