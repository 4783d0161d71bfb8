"""State representations for the coherence toolkit.

The reference (incoherent) basis is always the computational basis of the
stored array. Values are immutable after construction: the validators copy
the input and mark the stored array read-only.
"""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

NORM_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-12
PSD_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-12
WEIGHT_SUM_TOLERANCE = 1e-10
MIN_NORM = 1e-12


class Subsystem(str, Enum):
    """Subsystem selector of a bipartite state."""
    A = "A"
    B = "B"


def _frozen_array(value, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=np.complex128)
    if array.ndim != ndim or array.size == 0:
        raise ValueError(f"{name} must be a non-empty {ndim}-dimensional array, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} contains non-finite entries")
    array.setflags(write=False)
    return array


class PureState(BaseModel):
    """Normalized amplitude vector |psi> = sum_i c_i |i>."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def _as_vector(cls, value) -> np.ndarray:
        return _frozen_array(value, 1, "amplitudes")

    @field_validator("amplitudes")
    @classmethod
    def _normalized(cls, vector: np.ndarray) -> np.ndarray:
        norm_sq = float(np.vdot(vector, vector).real)
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"amplitudes are not normalized: sum |c_i|^2 = {norm_sq!r}")
        return vector

    @classmethod
    def from_vector(cls, vector) -> "PureState":
        """Normalize an arbitrary non-zero vector."""
        vector = np.asarray(vector, dtype=np.complex128)
        norm = float(np.linalg.norm(vector))
        if norm < MIN_NORM:
            raise ValueError(f"cannot normalize a vector of norm {norm:.3e}")
        return cls(amplitudes=vector / norm)

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        vector = np.zeros(dim, dtype=np.complex128)
        vector[index] = 1.0
        return cls(amplitudes=vector)

    @classmethod
    def maximally_coherent(cls, dim: int) -> "PureState":
        return cls(amplitudes=np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    @property
    def weights(self) -> np.ndarray:
        """Populations |c_i|^2 in the reference basis."""
        return np.abs(self.amplitudes) ** 2

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(matrix=np.outer(self.amplitudes, self.amplitudes.conj()))


class BipartitePureState(BaseModel):
    """|phi>_AB = sum_ij c_ij |i>_A |j>_B stored as the d_A x d_B matrix c."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_matrix(cls, value) -> np.ndarray:
        return _frozen_array(value, 2, "coeffs")

    @field_validator("coeffs")
    @classmethod
    def _normalized(cls, coeffs: np.ndarray) -> np.ndarray:
        norm_sq = float(np.sum(np.abs(coeffs) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOLERANCE:
            raise ValueError(f"coefficients are not normalized: sum |c_ij|^2 = {norm_sq!r}")
        return coeffs

    @classmethod
    def from_vector(cls, vector, dim_a: int, dim_b: int) -> "BipartitePureState":
        """Build from a product-basis vector in row-major |i>_A|j>_B order, normalizing it."""
        vector = np.asarray(vector, dtype=np.complex128)
        if vector.size != dim_a * dim_b:
            raise ValueError(f"vector of length {vector.size} does not match dims {dim_a}x{dim_b}")
        return cls(coeffs=PureState.from_vector(vector).amplitudes.reshape(dim_a, dim_b))

    @classmethod
    def product(cls, psi_a: PureState, psi_b: PureState) -> "BipartitePureState":
        return cls(coeffs=np.outer(psi_a.amplitudes, psi_b.amplitudes))

    @property
    def dim_a(self) -> int:
        return int(self.coeffs.shape[0])

    @property
    def dim_b(self) -> int:
        return int(self.coeffs.shape[1])

    def flatten(self) -> PureState:
        """The same state as a d_A*d_B dimensional pure state."""
        return PureState(amplitudes=self.coeffs.reshape(-1))


class DensityMatrix(BaseModel):
    """Hermitian, positive semidefinite, unit-trace matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_square(cls, value) -> np.ndarray:
        matrix = _frozen_array(value, 2, "matrix")
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"matrix must be square, got shape {matrix.shape}")
        return matrix

    @field_validator("matrix")
    @classmethod
    def _physical(cls, matrix: np.ndarray) -> np.ndarray:
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > HERMITIAN_TOLERANCE:
            raise ValueError(f"matrix is not Hermitian (max deviation {asymmetry:.3e})")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOLERANCE:
            raise ValueError(f"matrix trace is {trace!r}, expected 1")
        smallest = float(np.linalg.eigvalsh(matrix)[0])
        if smallest < -PSD_TOLERANCE:
            raise ValueError(f"matrix is not positive semidefinite (eigenvalue {smallest:.3e})")
        return matrix

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (ascending, clamped at 0) and eigenvectors as columns."""
        evals, evecs = np.linalg.eigh(self.matrix)
        return np.clip(evals, 0.0, None), evecs

    def rank(self, threshold: float = 1e-12) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > threshold))


class Ensemble(BaseModel):
    """Pure-state decomposition {p_i, |psi_i>} of a density matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    members: list[tuple[float, PureState]]

    @model_validator(mode="after")
    def _valid_members(self) -> "Ensemble":
        if not self.members:
            raise ValueError("an ensemble needs at least one member")
        weights = np.array([weight for weight, _ in self.members])
        if np.any(weights < 0):
            raise ValueError("ensemble weights must be non-negative")
        if abs(float(weights.sum()) - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"ensemble weights sum to {weights.sum()!r}, expected 1")
        dims = {state.dim for _, state in self.members}
        if len(dims) != 1:
            raise ValueError(f"ensemble members have mixed dimensions {sorted(dims)}")
        return self

    @property
    def dim(self) -> int:
        return self.members[0][1].dim

    @property
    def weights(self) -> np.ndarray:
        return np.array([weight for weight, _ in self.members])

    def density_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for weight, state in self.members:
            matrix += weight * np.outer(state.amplitudes, state.amplitudes.conj())
        return matrix

    def reconstruction_error(self, rho: DensityMatrix) -> float:
        """Frobenius distance between sum_i p_i |psi_i><psi_i| and rho."""
        return float(np.linalg.norm(self.density_matrix() - rho.matrix))

    def reconstructs(self, rho: DensityMatrix, tol: float = 1e-8) -> bool:
        return rho.dim == self.dim and self.reconstruction_error(rho) <= tol
