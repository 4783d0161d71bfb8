"""Convex roof coherence measure based on 1/2-entropy."""

import numpy as np

from ..core import l1_coherence
from ..state import DensityMatrix
from .base import CoherenceMeasure, MeasureId, qubit_mixing_root


def _pure_values(weights: np.ndarray) -> np.ndarray:
    return np.clip(2.0 * np.log2(np.sum(np.sqrt(weights), axis=0)), 0.0, None)


def _qubit_value(t: float) -> float:
    s = qubit_mixing_root(t)
    return max(0.0, float(2.0 * np.log2(np.sqrt((1.0 + s) / 2.0) + np.sqrt((1.0 - s) / 2.0))))


def half_entropy_measure() -> CoherenceMeasure:
    # The qubit value equals log2(1 + t), concave in t: it is the value of the
    # decomposition whose members all carry l1 coherence t, an upper bound on
    # the roof of a mixed qubit.
    return CoherenceMeasure(
        id=MeasureId.HALF_ENTROPY,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=False,
    )


def qubit_half_entropy(rho: DensityMatrix) -> float:
    """2 log2( sqrt((1+s)/2) + sqrt((1-s)/2) ), s = sqrt(1 - C_l1(rho)^2)."""
    if rho.dim != 2:
        raise ValueError(f"qubit_half_entropy needs a 2x2 density matrix, got dim {rho.dim}")
    return _qubit_value(l1_coherence(rho))
