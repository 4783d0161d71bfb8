"""Shared definitions for the convex-roof coherence measures."""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

LOG2 = np.log(2.0)


class MeasureId(str, Enum):
    """The six convex-roof coherence measures."""
    FORMATION = "formation"
    CONCURRENCE = "concurrence"
    GEOMETRIC = "geometric"
    FIDELITY = "fidelity"
    LINEAR_ENTROPY = "linear-entropy"
    HALF_ENTROPY = "half-entropy"

    @classmethod
    def parse(cls, name: str) -> "MeasureId":
        """Case-insensitive lookup by CLI name; underscores are accepted for dashes."""
        key = name.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        valid = ", ".join(member.value for member in cls)
        raise ValueError(f"unknown measure {name!r}; expected one of: {valid}")


@dataclass(frozen=True)
class CoherenceMeasure:
    """Pure-state functional plus its single-qubit convex roof, if known.

    ``pure_values`` maps populations ``w`` of shape (d, ...) to the measure of
    every column. ``qubit_value`` maps t = C_l1(rho) of a qubit to a value;
    ``qubit_form_exact`` tells whether that value is the convex roof itself
    or only the value of one concrete decomposition.
    """
    id: MeasureId
    pure_values: Callable[[np.ndarray], np.ndarray]
    qubit_value: Optional[Callable[[float], float]] = None
    qubit_form_exact: bool = False
    literal: bool = False


def qubit_mixing_root(t: float) -> float:
    """sqrt(1 - t^2) for a qubit with l1 coherence t, clipped to [0, 1]."""
    t = min(max(float(t), 0.0), 1.0)
    return float(np.sqrt(max(0.0, 1.0 - t * t)))
