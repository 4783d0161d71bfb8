"""Convex roof coherence measure based on linear entropy.

The measure is 1 - sum_i |c_i|^4, the linear entropy of the dephased pure
state. ``literal=True`` evaluates sum_i |c_i|^4 instead; that functional is
1 on incoherent states, so it is kept only to reproduce printed numbers and
has no qubit closed form.
"""

import numpy as np

from .base import CoherenceMeasure, MeasureId


def _pure_values(weights: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.sum(weights ** 2, axis=0), 0.0, None)


def _literal_values(weights: np.ndarray) -> np.ndarray:
    return np.sum(weights ** 2, axis=0)


def _qubit_value(t: float) -> float:
    t = min(max(float(t), 0.0), 1.0)
    return t * t / 2.0


def linear_entropy_measure(literal: bool = False) -> CoherenceMeasure:
    if literal:
        return CoherenceMeasure(
            id=MeasureId.LINEAR_ENTROPY,
            pure_values=_literal_values,
            literal=True,
        )
    return CoherenceMeasure(
        id=MeasureId.LINEAR_ENTROPY,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=True,
    )
