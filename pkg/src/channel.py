"""Incoherent channels and the channel built from a bipartite pure state.

For |phi>_AB = sum_ij c_ij |i>|j> with row weights q_i, the diagonal Kraus
operators K_j = sum_i c_ij / sqrt(q_i) |i><i| map the marginal pure state
sum_i sqrt(q_i)|i> onto rho_A.
"""

import logging
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from .core import ZERO_WEIGHT, marginal_pure_state, partial_trace
from .measures import MeasureId, pure_coherence, qubit_closed_form
from .state import BipartitePureState, DensityMatrix, PureState, Subsystem

logger = logging.getLogger(__name__)

COMPLETENESS_TOLERANCE = 1e-10
TRACE_DRIFT_TOLERANCE = 1e-8
PURITY_TOLERANCE = 1e-10


class KrausSet(BaseModel):
    """Complete set of incoherent Kraus operators on one system."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operators: list[np.ndarray]

    @field_validator("operators", mode="before")
    @classmethod
    def _as_matrices(cls, value) -> list[np.ndarray]:
        operators = []
        for operator in value:
            matrix = np.array(operator, dtype=np.complex128)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise ValueError(f"Kraus operators must be square matrices, got shape {matrix.shape}")
            matrix.setflags(write=False)
            operators.append(matrix)
        if not operators:
            raise ValueError("a Kraus set needs at least one operator")
        if len({op.shape for op in operators}) != 1:
            raise ValueError("Kraus operators have mixed shapes")
        return operators

    @field_validator("operators")
    @classmethod
    def _complete_and_incoherent(cls, operators: list[np.ndarray]) -> list[np.ndarray]:
        dim = operators[0].shape[0]
        total = sum(op.conj().T @ op for op in operators)
        deviation = float(np.max(np.abs(total - np.eye(dim))))
        if deviation > COMPLETENESS_TOLERANCE:
            raise ValueError(f"Kraus set is not complete: max |sum K^dagger K - I| = {deviation:.3e}")
        for index, op in enumerate(operators):
            nonzero_per_column = np.sum(np.abs(op) > ZERO_WEIGHT, axis=0)
            if np.any(nonzero_per_column > 1):
                raise ValueError(f"Kraus operator {index} maps a basis state to a superposition")
        return operators

    @property
    def dim(self) -> int:
        return int(self.operators[0].shape[0])

    @classmethod
    def identity(cls, dim: int) -> "KrausSet":
        return cls(operators=[np.eye(dim)])


def build_theorem_channel(phi: BipartitePureState) -> KrausSet:
    """d_B diagonal operators K_j, plus one operator on rows with q_i < 1e-14 if any."""
    c = phi.coeffs
    q = np.sum(np.abs(c) ** 2, axis=1)
    occupied = q >= ZERO_WEIGHT
    scale = np.zeros_like(q)
    scale[occupied] = 1.0 / np.sqrt(q[occupied])

    operators = [np.diag(c[:, j] * scale) for j in range(phi.dim_b)]
    if not np.all(occupied):
        operators.append(np.diag((~occupied).astype(np.complex128)))
    return KrausSet(operators=operators)


def apply_channel(kraus: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """sum_n K_n rho K_n^dagger."""
    if kraus.dim != rho.dim:
        raise ValueError(f"dimension mismatch: channel acts on {kraus.dim}, state has {rho.dim}")
    out = sum(op @ rho.matrix @ op.conj().T for op in kraus.operators)
    trace = float(np.trace(out).real)
    if abs(trace - 1.0) > TRACE_DRIFT_TOLERANCE:
        raise ValueError(f"channel output trace drifted to {trace!r}")
    out = (out + out.conj().T) / 2
    return DensityMatrix(matrix=out / np.trace(out).real)


def _coherence_of_output(measure: MeasureId, rho: DensityMatrix, literal: bool) -> Optional[float]:
    evals, evecs = rho.eigh()
    if evals[-1] >= 1.0 - PURITY_TOLERANCE:
        return pure_coherence(measure, PureState.from_vector(evecs[:, -1]), literal)
    if rho.dim == 2:
        # Upper-bound qubit forms still witness monotonicity.
        return qubit_closed_form(measure, rho, literal)
    return None


def channel_monotonicity_gap(
    measure: MeasureId,
    phi: BipartitePureState,
    literal: bool = False,
) -> Optional[float]:
    """C(marginal pure) - C(Lambda(marginal pure)) under the theorem channel.

    None when the output is a mixed state without a qubit closed form.
    """
    psi = marginal_pure_state(phi)
    output = apply_channel(build_theorem_channel(phi), psi.projector())
    value = _coherence_of_output(measure, output, literal)
    if value is None:
        logger.debug(f"{MeasureId(measure).value}: no closed value for a mixed {output.dim}-dim output")
        return None
    return pure_coherence(measure, psi, literal) - value


def channel_reproduces_marginal(phi: BipartitePureState, tol: float = 1e-10) -> bool:
    """Lambda(marginal pure) equals rho_A within ``tol`` Frobenius."""
    output = apply_channel(build_theorem_channel(phi), marginal_pure_state(phi).projector())
    return float(np.linalg.norm(output.matrix - partial_trace(phi, Subsystem.A).matrix)) <= tol
