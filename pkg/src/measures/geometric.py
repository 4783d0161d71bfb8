"""Geometric measure of coherence."""

import numpy as np

from .base import CoherenceMeasure, MeasureId, qubit_mixing_root


def _pure_values(weights: np.ndarray) -> np.ndarray:
    return np.clip(1.0 - np.max(weights, axis=0), 0.0, None)


def _qubit_value(t: float) -> float:
    return (1.0 - qubit_mixing_root(t)) / 2.0


def geometric_measure() -> CoherenceMeasure:
    return CoherenceMeasure(
        id=MeasureId.GEOMETRIC,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=True,
    )
