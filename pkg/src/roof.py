"""Numerical convex-roof estimation over ensemble decompositions.

Every size-n decomposition of a rank-r state rho = sum_k lambda_k |e_k><e_k|
is |psi~_i> = sum_k U_ik sqrt(lambda_k) |e_k> for an n x r isometry U (the
mixer). The optimizer searches mixers of the form
(B exp(iH))[:, :r], with B a per-restart Haar-random base unitary (identity
for restart 0) and H Hermitian. Each evaluated mixer is a concrete ensemble,
so the returned value is always attained and is an upper bound on C_f(rho).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.linalg import expm
from scipy.optimize import minimize
from scipy.stats import unitary_group
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from .config import get_roof_config, get_thread_count
from .core import l1_coherence, random_mixed_state
from .measures import MeasureId, get_measure, pure_coherence, pure_values
from .state import DensityMatrix, Ensemble, PureState
from .utils import normalize_seed, seed_to_int, spawn_seeds, track_performance

logger = logging.getLogger(__name__)

RANK_THRESHOLD = 1e-12
ISOMETRY_TOLERANCE = 1e-10
ZERO_WEIGHT = 1e-14
MAX_ENSEMBLE_SIZE = 16


def default_ensemble_size(rank: int) -> int:
    """rank^2 members, capped at 16 but never below the rank."""
    return max(rank, min(rank * rank, MAX_ENSEMBLE_SIZE))


class RoofConfig(BaseModel):
    """Controls of the infimum search."""

    model_config = ConfigDict(frozen=True)

    ensemble_size: Optional[int] = Field(default=None, ge=1, description="Members n; None means rank^2 capped at 16")
    restarts: int = Field(default=32, ge=1)
    max_iters: int = Field(default=2000, ge=1)
    step_tolerance: float = Field(default=1e-10, gt=0)
    seed: int = 0

    def resolved_ensemble_size(self, rank: int) -> int:
        size = self.ensemble_size if self.ensemble_size is not None else default_ensemble_size(rank)
        if size < rank:
            raise ValueError(f"ensemble_size {size} is below the rank {rank} of the target state")
        return size


class RoofResult(BaseModel):
    """Best decomposition found; ``value`` is attained by ``ensemble``."""

    value: float = Field(ge=0)
    ensemble: Ensemble
    converged: bool
    iterations_used: int
    best_restart: int = 0


def _eigen_factor(rho: DensityMatrix) -> np.ndarray:
    """Columns sqrt(lambda_k) |e_k> over the eigenvalues above the rank threshold."""
    evals, evecs = rho.eigh()
    keep = evals > RANK_THRESHOLD
    return evecs[:, keep] * np.sqrt(evals[keep])


def _members(factor: np.ndarray, mixer: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized members as columns and their weights p_i."""
    unnormalized = factor @ mixer.T
    return unnormalized, np.sum(np.abs(unnormalized) ** 2, axis=0)


def decomposition_from_mixer(rho: DensityMatrix, mixer: np.ndarray) -> Ensemble:
    """Ensemble {p_i, psi_i} realized by an n x r isometry."""
    mixer = np.asarray(mixer, dtype=np.complex128)
    if mixer.ndim != 2:
        raise ValueError(f"mixer must be a matrix, got shape {mixer.shape}")
    deviation = float(np.max(np.abs(mixer.conj().T @ mixer - np.eye(mixer.shape[1]))))
    if deviation > ISOMETRY_TOLERANCE:
        raise ValueError(f"mixer columns are not orthonormal (deviation {deviation:.3e})")
    factor = _eigen_factor(rho)
    if mixer.shape[1] != factor.shape[1]:
        raise ValueError(f"mixer has {mixer.shape[1]} columns but rank(rho) = {factor.shape[1]}")

    unnormalized, weights = _members(factor, mixer)
    live = [i for i in range(weights.size) if weights[i] >= ZERO_WEIGHT]
    total = float(np.sum(weights[live]))
    return Ensemble(
        members=[(float(weights[i] / total), PureState.from_vector(unnormalized[:, i])) for i in live]
    )


def ensemble_value(measure: MeasureId, ensemble: Ensemble, literal: bool = False) -> float:
    """sum_i p_i C_f(psi_i) of a concrete decomposition."""
    return float(sum(weight * pure_coherence(measure, state, literal) for weight, state in ensemble.members))


class _RestartOutcome(NamedTuple):
    index: int
    value: float
    mixer: np.ndarray
    converged: bool
    iterations: int


class _EnsembleObjective:
    """Weighted pure-state measure of the ensemble produced by a mixer."""

    def __init__(self, measure: MeasureId, factor: np.ndarray, ensemble_size: int, literal: bool):
        self.measure = measure
        self.literal = literal
        self.factor = factor
        self.size = ensemble_size
        self.rank = factor.shape[1]
        self._upper = np.triu_indices(ensemble_size, 1)

    @property
    def num_params(self) -> int:
        return self.size * self.size

    def hermitian(self, x: np.ndarray) -> np.ndarray:
        n = self.size
        m = self._upper[0].size
        upper = np.zeros((n, n), dtype=np.complex128)
        upper[self._upper] = x[n:n + m] + 1j * x[n + m:]
        return upper + upper.conj().T + np.diag(x[:n])

    def mixer(self, base: np.ndarray, x: np.ndarray) -> np.ndarray:
        return (base @ expm(1j * self.hermitian(x)))[:, :self.rank]

    def __call__(self, mixer: np.ndarray) -> float:
        unnormalized, weights = _members(self.factor, mixer)
        live = weights >= ZERO_WEIGHT
        populations = np.abs(unnormalized[:, live]) ** 2 / weights[live]
        values = pure_values(self.measure, populations, self.literal)
        return float(np.dot(weights[live], values))


def _start_unitary(index: int, seed_seq: np.random.SeedSequence, attempt: int, size: int) -> np.ndarray:
    if index == 0 and attempt == 1:
        # eigendecomposition start
        return np.eye(size, dtype=np.complex128)
    rng = np.random.default_rng([seed_to_int(seed_seq), attempt])
    return unitary_group.rvs(size, random_state=rng)


def _descend(objective: _EnsembleObjective, base: np.ndarray, config: RoofConfig) -> tuple[float, np.ndarray, bool, int]:
    best = {"value": np.inf, "x": np.zeros(objective.num_params)}

    def fun(x: np.ndarray) -> float:
        value = objective(objective.mixer(base, x))
        if not np.isfinite(value):
            raise FloatingPointError("non-finite ensemble value")
        if value < best["value"]:
            best["value"], best["x"] = value, x.copy()
        return value

    result = minimize(
        fun,
        np.zeros(objective.num_params),
        method="L-BFGS-B",
        options={
            "maxiter": config.max_iters,
            "maxfun": config.max_iters * (objective.num_params + 2),
            "ftol": config.step_tolerance,
            "gtol": 1e-12,
        },
    )
    converged = bool(result.success) and int(result.nit) < config.max_iters
    return best["value"], objective.mixer(base, best["x"]), converged, int(result.nit)


def _run_restart(
    objective: _EnsembleObjective,
    index: int,
    seed_seq: np.random.SeedSequence,
    config: RoofConfig,
) -> _RestartOutcome:
    for attempt in Retrying(
        stop=stop_after_attempt(3),
        retry=retry_if_exception_type((np.linalg.LinAlgError, FloatingPointError)),
        reraise=True,
    ):
        with attempt:
            base = _start_unitary(index, seed_seq, attempt.retry_state.attempt_number, objective.size)
            value, mixer, converged, iterations = _descend(objective, base, config)
    logger.debug(f"restart {index}: value={value:.12g} converged={converged} iterations={iterations}")
    return _RestartOutcome(index, value, mixer, converged, iterations)


@track_performance
def convex_roof_upper_bound(
    measure: MeasureId,
    rho: DensityMatrix,
    config: Optional[RoofConfig] = None,
    literal: bool = False,
) -> RoofResult:
    """Minimize sum_i p_i C_f(psi_i) over decompositions of rho.

    Restarts are independent and may run on COHERENCE_ROOF_THREADS workers;
    the minimum value wins with the lowest restart index breaking ties, so
    the result does not depend on scheduling.
    """
    config = config or get_roof_config()
    measure = MeasureId(measure)
    factor = _eigen_factor(rho)
    rank = factor.shape[1]

    if rank == 1:
        psi = PureState.from_vector(factor[:, 0])
        return RoofResult(
            value=pure_coherence(measure, psi, literal),
            ensemble=Ensemble(members=[(1.0, psi)]),
            converged=True,
            iterations_used=0,
        )

    size = config.resolved_ensemble_size(rank)
    objective = _EnsembleObjective(measure, factor, size, literal)
    seeds = spawn_seeds(config.seed, config.restarts)
    threads = min(get_thread_count(), config.restarts)

    def run(index: int) -> _RestartOutcome:
        return _run_restart(objective, index, seeds[index], config)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(config.restarts)))
    else:
        outcomes = [run(index) for index in range(config.restarts)]

    best = min(outcomes, key=lambda outcome: (outcome.value, outcome.index))
    ensemble = decomposition_from_mixer(rho, best.mixer)
    return RoofResult(
        value=max(0.0, ensemble_value(measure, ensemble, literal)),
        ensemble=ensemble,
        converged=best.converged,
        iterations_used=best.iterations,
        best_restart=best.index,
    )


def validate_qubit_formula(
    measure: MeasureId,
    n_states: int = 100,
    config: Optional[RoofConfig] = None,
    seed: int = 0,
    tolerance: float = 1e-4,
    literal: bool = False,
) -> bool:
    """Check a qubit formula against the optimizer on seeded random qubit states."""
    definition = get_measure(measure, literal)
    if definition.qubit_value is None:
        return False

    for child in spawn_seeds(normalize_seed(seed), n_states):
        rho = random_mixed_state(2, seed_to_int(child))
        closed = definition.qubit_value(l1_coherence(rho))
        roof = convex_roof_upper_bound(measure, rho, config, literal).value
        if abs(roof - closed) > tolerance:
            logger.warning(
                f"{definition.id.value}: qubit formula {closed:.8f} disagrees with roof {roof:.8f}"
            )
            return False
    return True
