"""Coherence concurrence: convex roof of the l1 norm of coherence."""

import numpy as np

from .base import CoherenceMeasure, MeasureId


def _pure_values(weights: np.ndarray) -> np.ndarray:
    # (sum_i |c_i|)^2 - 1 equals the l1 norm of |psi><psi|
    return np.clip(np.sum(np.sqrt(weights), axis=0) ** 2 - 1.0, 0.0, None)


def _qubit_value(t: float) -> float:
    return min(max(float(t), 0.0), 1.0)


def concurrence_measure() -> CoherenceMeasure:
    return CoherenceMeasure(
        id=MeasureId.CONCURRENCE,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=True,
    )
