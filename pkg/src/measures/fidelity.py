"""Convex roof coherence measure based on fidelity.

For pure states C_F(psi) = sqrt(1 - max_delta F(psi, delta)), and the
maximal fidelity to an incoherent state is max_i |c_i|^2.
``max_incoherent_fidelity`` performs that maximization numerically.
"""

import numpy as np
from scipy.optimize import minimize

from ..core import ZERO_WEIGHT, fidelity_of_matrices
from ..state import PureState
from ..utils import normalize_seed
from .base import CoherenceMeasure, MeasureId, qubit_mixing_root


def _pure_values(weights: np.ndarray) -> np.ndarray:
    return np.sqrt(np.clip(1.0 - np.max(weights, axis=0), 0.0, None))


def _qubit_value(t: float) -> float:
    return float(np.sqrt(max(0.0, (1.0 - qubit_mixing_root(t)) / 2.0)))


def fidelity_measure() -> CoherenceMeasure:
    return CoherenceMeasure(
        id=MeasureId.FIDELITY,
        pure_values=_pure_values,
        qubit_value=_qubit_value,
        qubit_form_exact=True,
    )


def max_incoherent_fidelity(psi: PureState, restarts: int = 8, seed: int = 0) -> float:
    """Maximize the Uhlmann fidelity F(psi, delta) over diagonal states delta.

    delta = diag(y) / sum(y) with y in [0, 1]^d. Descents start at every
    basis projector, at the maximally mixed state and at ``restarts``
    random interior points.
    """
    projector = np.outer(psi.amplitudes, psi.amplitudes.conj())
    rng = np.random.default_rng(normalize_seed(seed))

    def negative_fidelity(y: np.ndarray) -> float:
        total = float(np.sum(y))
        if total < ZERO_WEIGHT:
            return 0.0
        return -fidelity_of_matrices(projector, np.diag(y / total).astype(np.complex128))

    starts = list(np.eye(psi.dim)) + [np.full(psi.dim, 0.5)]
    starts += [rng.uniform(0.05, 1.0, size=psi.dim) for _ in range(restarts)]
    bounds = [(0.0, 1.0)] * psi.dim
    best = 0.0
    for y0 in starts:
        best = max(best, -negative_fidelity(y0))
        result = minimize(negative_fidelity, y0, method="L-BFGS-B", bounds=bounds, options={"ftol": 1e-15, "gtol": 1e-12})
        best = max(best, -float(result.fun))
    return best
