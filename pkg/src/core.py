"""Linear-algebra primitives shared by the measures and the checks."""

import numpy as np
from scipy.special import entr

from .state import BipartitePureState, DensityMatrix, PureState, Subsystem
from .utils import normalize_seed

ZERO_WEIGHT = 1e-14
SPECTRAL_CUTOFF = 1e-12


def partial_trace(state: BipartitePureState, keep: Subsystem) -> DensityMatrix:
    """Reduced state rho_A = c c^dagger (keep=A) or rho_B = c^T c^* (keep=B)."""
    c = state.coeffs
    if Subsystem(keep) is Subsystem.A:
        reduced = c @ c.conj().T
    else:
        reduced = c.T @ c.conj()
    # Enforce exact Hermiticity lost to rounding in the product.
    return DensityMatrix(matrix=(reduced + reduced.conj().T) / 2)


def conditional_decomposition(
    state: BipartitePureState,
    conditioned_on: Subsystem,
) -> list[tuple[float, PureState]]:
    """Branches {(q_i, |phi_i>_B)} (on A) or {(p_j, |phi_j>_A)} (on B).

    Branches with weight below 1e-14 are dropped; the remaining weights are
    the exact row (column) norms and sum to 1 within rounding.
    """
    c = state.coeffs if Subsystem(conditioned_on) is Subsystem.A else state.coeffs.T
    branches = []
    for row in c:
        weight = float(np.sum(np.abs(row) ** 2))
        if weight < ZERO_WEIGHT:
            continue
        branches.append((weight, PureState.from_vector(row)))
    return branches


def marginal_pure_state(state: BipartitePureState) -> PureState:
    """sum_i sqrt(q_i) |i>_A with q_i the row weights of c."""
    q = np.sum(np.abs(state.coeffs) ** 2, axis=1)
    return PureState.from_vector(np.sqrt(q))


def diagonal_part(rho: DensityMatrix) -> DensityMatrix:
    """Dephasing Delta(rho) = sum_i rho_ii |i><i|."""
    return DensityMatrix(matrix=np.diag(np.diag(rho.matrix).real))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """-Tr rho log2 rho in bits, with 0 log 0 = 0."""
    evals = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    return max(0.0, float(np.sum(entr(evals)) / np.log(2)))


def _psd_eigenvalues(evals: np.ndarray) -> np.ndarray:
    """Clip negatives and zero rounding-level eigenvalues relative to the largest."""
    evals = np.clip(evals, 0.0, None)
    evals[evals <= SPECTRAL_CUTOFF * evals.max(initial=0.0)] = 0.0
    return evals


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(matrix)
    return (evecs * np.sqrt(_psd_eigenvalues(evals))) @ evecs.conj().T


def fidelity_of_matrices(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity on raw density arrays, skipping model validation."""
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    inner = (inner + inner.conj().T) / 2
    evals = _psd_eigenvalues(np.linalg.eigvalsh(inner))
    return float(min(1.0, np.sum(np.sqrt(evals)) ** 2))


def uhlmann_fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return fidelity_of_matrices(rho.matrix, sigma.matrix)


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of the off-diagonal magnitudes."""
    magnitudes = np.abs(rho.matrix)
    return float(np.sum(magnitudes) - np.sum(np.diag(magnitudes)))


def _complex_gaussian(dim: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(normalize_seed(seed))
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def haar_random_pure(dim: int, seed: int) -> PureState:
    """Haar-uniform pure state: a normalized complex Gaussian vector."""
    if dim < 1:
        raise ValueError(f"dim must be at least 1, got {dim}")
    return PureState.from_vector(_complex_gaussian(dim, seed))


def haar_random_bipartite(dim_a: int, dim_b: int, seed: int) -> BipartitePureState:
    if dim_a < 1 or dim_b < 1:
        raise ValueError(f"dims must be at least 1, got {dim_a}x{dim_b}")
    return BipartitePureState.from_vector(_complex_gaussian(dim_a * dim_b, seed), dim_a, dim_b)


def is_incoherent(rho: DensityMatrix, tol: float = 1e-10) -> bool:
    off_diagonal = rho.matrix - np.diag(np.diag(rho.matrix))
    return bool(np.all(np.abs(off_diagonal) <= tol))


def random_mixed_state(dim: int, seed: int) -> DensityMatrix:
    """Reduced state of a Haar-random dim x dim pure state (full rank almost surely)."""
    return partial_trace(haar_random_bipartite(dim, dim, seed), Subsystem.A)
