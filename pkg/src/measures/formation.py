"""Coherence of formation: convex roof of the entropy of the dephased state."""

import numpy as np
from scipy.special import entr

from .base import LOG2, CoherenceMeasure, MeasureId, qubit_mixing_root


def _pure_values(weights: np.ndarray) -> np.ndarray:
    return np.clip(np.sum(entr(weights), axis=0) / LOG2, 0.0, None)


def _qubit_value(t: float) -> float:
    x = (1.0 + qubit_mixing_root(t)) / 2.0
    return max(0.0, float((entr(x) + entr(1.0 - x)) / LOG2))


def formation_measure() -> CoherenceMeasure:
    return CoherenceMeasure(
        id=MeasureId.FORMATION,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=True,
    )
