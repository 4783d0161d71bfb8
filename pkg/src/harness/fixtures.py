"""Hardcoded example states, kept as exact rationals until load time."""

import json
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from ..state import BipartitePureState

FIXTURES_PATH = Path(__file__).parent / "fixtures.json"


@lru_cache(maxsize=1)
def _load() -> dict:
    with open(FIXTURES_PATH, encoding="utf-8") as f:
        return json.load(f)


def fixture_names() -> list[str]:
    return list(_load()["states"])


def squared_amplitudes(name: str) -> list[Fraction]:
    try:
        entry = _load()["states"][name]
    except KeyError:
        raise ValueError(f"unknown fixture {name!r}; expected one of: {', '.join(fixture_names())}") from None
    return [Fraction(value) for value in entry["squared_amplitudes"]]


def fixture_state(name: str) -> BipartitePureState:
    """The named state with amplitudes sqrt(|c_ij|^2) evaluated from the rationals."""
    weights = squared_amplitudes(name)
    dim_a, dim_b = _load()["states"][name]["dims"]
    if sum(weights) != 1:
        raise ValueError(f"fixture {name!r} squared amplitudes sum to {sum(weights)}, expected 1")
    amplitudes = np.sqrt(np.array([float(w) for w in weights]))
    return BipartitePureState.from_vector(amplitudes, dim_a, dim_b)
