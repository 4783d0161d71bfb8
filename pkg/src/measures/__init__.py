"""Closed-form convex-roof coherence measures."""

from typing import Optional

import numpy as np

from ..core import l1_coherence
from ..state import DensityMatrix, PureState
from .base import CoherenceMeasure, MeasureId
from .concurrence import concurrence_measure
from .fidelity import fidelity_measure, max_incoherent_fidelity
from .formation import formation_measure
from .geometric import geometric_measure
from .half_entropy import half_entropy_measure, qubit_half_entropy
from .linear_entropy import linear_entropy_measure

_MEASURES = {
    MeasureId.FORMATION: formation_measure(),
    MeasureId.CONCURRENCE: concurrence_measure(),
    MeasureId.GEOMETRIC: geometric_measure(),
    MeasureId.FIDELITY: fidelity_measure(),
    MeasureId.LINEAR_ENTROPY: linear_entropy_measure(),
    MeasureId.HALF_ENTROPY: half_entropy_measure(),
}
_LITERAL_LINEAR_ENTROPY = linear_entropy_measure(literal=True)

# Qubit formulas the toolkit may evaluate. roof.validate_qubit_formula checks
# the exact ones against the optimizer; the half-entropy one is an upper bound.
# Anything outside this set reports None.
ADMITTED_QUBIT_FORMS = frozenset(MeasureId)


def get_measure(measure: MeasureId, literal: bool = False) -> CoherenceMeasure:
    measure = MeasureId(measure)
    if literal and measure is MeasureId.LINEAR_ENTROPY:
        return _LITERAL_LINEAR_ENTROPY
    return _MEASURES[measure]


def pure_coherence(measure: MeasureId, psi: PureState, literal: bool = False) -> float:
    """Closed-form value of a measure on a pure state."""
    return float(get_measure(measure, literal).pure_values(psi.weights))


def pure_values(measure: MeasureId, weights: np.ndarray, literal: bool = False) -> np.ndarray:
    """Vectorized closed forms; ``weights`` holds populations column-wise."""
    return get_measure(measure, literal).pure_values(weights)


def qubit_closed_form(measure: MeasureId, rho: DensityMatrix, literal: bool = False) -> Optional[float]:
    """Known single-qubit value as a function of t = C_l1(rho), or None if unavailable."""
    if rho.dim != 2:
        raise ValueError(f"qubit closed forms need a 2x2 density matrix, got dim {rho.dim}")
    definition = get_measure(measure, literal)
    if definition.qubit_value is None or definition.id not in ADMITTED_QUBIT_FORMS:
        return None
    return definition.qubit_value(l1_coherence(rho))


def qubit_form_is_exact(measure: MeasureId, literal: bool = False) -> bool:
    """True when the qubit closed form is the convex roof itself, not an upper bound."""
    definition = get_measure(measure, literal)
    return definition.qubit_value is not None and definition.qubit_form_exact and definition.id in ADMITTED_QUBIT_FORMS


__all__ = [
    "ADMITTED_QUBIT_FORMS",
    "CoherenceMeasure",
    "MeasureId",
    "get_measure",
    "max_incoherent_fidelity",
    "pure_coherence",
    "pure_values",
    "qubit_closed_form",
    "qubit_form_is_exact",
    "qubit_half_entropy",
]
