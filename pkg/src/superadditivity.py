"""Superadditivity checks on bipartite pure states.

Three inequalities are checked instance by instance:

* Theorem3: C(phi_AB) >= C(sum_i sqrt(q_i)|i>_A) + sum_i q_i C(phi_i^B), the
  sufficient condition for superadditivity.
* Alt24: C(phi_AB) >= sum_j p_j C(phi_j^A) + sum_i q_i C(phi_i^B), its weaker
  alternative.
* FullEq1: C(phi_AB) >= C(rho_A) + C(rho_B) itself.
"""

import logging
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import get_numeric_slack
from .core import conditional_decomposition, marginal_pure_state, partial_trace
from .measures import MeasureId, pure_coherence, qubit_closed_form, qubit_form_is_exact
from .roof import RANK_THRESHOLD, RoofConfig, convex_roof_upper_bound, ensemble_value
from .state import BipartitePureState, DensityMatrix, Ensemble, PureState, Subsystem
from .utils import array_digest

logger = logging.getLogger(__name__)

GAP_TOLERANCE = 1e-12


class Certification(str, Enum):
    """How far a reported gap can be trusted."""
    EXACT = "Exact"
    UPPER_BOUNDED_RHS = "UpperBoundedRhs"
    ESTIMATED = "Estimated"
    UPPER_BOUND = "UpperBound"  # single-state optimizer value


class Condition(str, Enum):
    THEOREM3 = "Theorem3"
    ALT24 = "Alt24"
    FULL_EQ1 = "FullEq1"

    @classmethod
    def parse(cls, name: str) -> "Condition":
        key = name.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        valid = ", ".join(member.value for member in cls)
        raise ValueError(f"unknown condition {name!r}; expected one of: {valid}")


class MarginalMethod(str, Enum):
    """How C(rho_A) and C(rho_B) are evaluated for the full gap."""
    AUTO = "auto"
    CLOSED_FORM = "closed-form"
    ROOF = "roof"


class CheckReport(BaseModel):
    """One inequality check: lhs against the sum of the rhs terms."""

    model_config = ConfigDict(frozen=True)

    measure: MeasureId
    condition: Condition
    label: str = ""
    lhs: float
    rhs_terms: list[tuple[str, float]]
    gap: float
    satisfied: bool
    certification: Certification
    state_digest: str
    numeric_slack: float = Field(ge=0)
    marginal_paths: dict[str, str] = Field(default_factory=dict)
    literal: bool = False

    @property
    def rhs_sum(self) -> float:
        return float(sum(value for _, value in self.rhs_terms))

    @model_validator(mode="after")
    def _consistent(self) -> "CheckReport":
        if abs(self.gap - (self.lhs - self.rhs_sum)) > GAP_TOLERANCE:
            raise ValueError(f"gap {self.gap!r} does not equal lhs - sum(rhs) = {self.lhs - self.rhs_sum!r}")
        if self.satisfied != (self.gap >= -self.numeric_slack):
            raise ValueError("satisfied must be gap >= -numeric_slack")
        return self

    def term(self, label: str) -> float:
        for name, value in self.rhs_terms:
            if name == label:
                return value
        raise KeyError(label)


def _report(
    measure: MeasureId,
    condition: Condition,
    phi: BipartitePureState,
    lhs: float,
    rhs_terms: list[tuple[str, float]],
    certification: Certification,
    slack: Optional[float],
    label: Optional[str],
    literal: bool,
    marginal_paths: Optional[dict[str, str]] = None,
) -> CheckReport:
    slack = get_numeric_slack() if slack is None else slack
    gap = lhs - float(sum(value for _, value in rhs_terms))
    return CheckReport(
        measure=measure,
        condition=condition,
        label=label or f"{measure.value}_{condition.value}",
        lhs=lhs,
        rhs_terms=rhs_terms,
        gap=gap,
        satisfied=gap >= -slack,
        certification=certification,
        state_digest=array_digest(phi.coeffs),
        numeric_slack=slack,
        marginal_paths=marginal_paths or {},
        literal=literal,
    )


def _branch_average(measure: MeasureId, branches: list[tuple[float, PureState]], literal: bool) -> float:
    return float(sum(weight * pure_coherence(measure, state, literal) for weight, state in branches))


def theorem_condition_check(
    measure: MeasureId,
    phi: BipartitePureState,
    literal: bool = False,
    slack: Optional[float] = None,
    label: Optional[str] = None,
) -> CheckReport:
    """Sufficient condition: every term is a pure-state closed form."""
    measure = MeasureId(measure)
    lhs = pure_coherence(measure, phi.flatten(), literal)
    rhs_terms = [
        ("marginal_A_pure", pure_coherence(measure, marginal_pure_state(phi), literal)),
        ("avg_B", _branch_average(measure, conditional_decomposition(phi, Subsystem.A), literal)),
    ]
    return _report(measure, Condition.THEOREM3, phi, lhs, rhs_terms, Certification.EXACT, slack, label, literal)


def alt_condition_check(
    measure: MeasureId,
    phi: BipartitePureState,
    literal: bool = False,
    slack: Optional[float] = None,
    label: Optional[str] = None,
) -> CheckReport:
    """Alternative condition with the A-side branch average in place of the marginal pure state."""
    measure = MeasureId(measure)
    lhs = pure_coherence(measure, phi.flatten(), literal)
    rhs_terms = [
        ("avg_A", _branch_average(measure, conditional_decomposition(phi, Subsystem.B), literal)),
        ("avg_B", _branch_average(measure, conditional_decomposition(phi, Subsystem.A), literal)),
    ]
    return _report(measure, Condition.ALT24, phi, lhs, rhs_terms, Certification.EXACT, slack, label, literal)


def _marginal_term(
    measure: MeasureId,
    rho: DensityMatrix,
    branches: list[tuple[float, PureState]],
    config: Optional[RoofConfig],
    method: MarginalMethod,
    literal: bool,
) -> tuple[float, str, bool]:
    """(value, path, exact) for one marginal."""
    evals, evecs = rho.eigh()
    if int(np.sum(evals > RANK_THRESHOLD)) == 1:
        return pure_coherence(measure, PureState.from_vector(evecs[:, -1]), literal), "pure", True

    if method is MarginalMethod.CLOSED_FORM:
        if rho.dim != 2:
            raise ValueError(f"closed-form marginals need qubit marginals, got dim {rho.dim}")
        value = qubit_closed_form(measure, rho, literal)
        if value is None:
            raise ValueError(f"no qubit closed form is available for {measure.value}")
        return value, "closed-form", qubit_form_is_exact(measure, literal)

    if method is MarginalMethod.AUTO and rho.dim == 2 and qubit_form_is_exact(measure, literal):
        return qubit_closed_form(measure, rho, literal), "closed-form", True

    roof = convex_roof_upper_bound(measure, rho, config, literal).value
    # The state's own branches form a decomposition of the marginal too.
    constructive = ensemble_value(measure, Ensemble(members=branches), literal)
    if constructive < roof:
        return constructive, "roof-branches", False
    return roof, "roof", False


def full_superadditivity_gap(
    measure: MeasureId,
    phi: BipartitePureState,
    config: Optional[RoofConfig] = None,
    method: MarginalMethod = MarginalMethod.AUTO,
    literal: bool = False,
    slack: Optional[float] = None,
    label: Optional[str] = None,
) -> CheckReport:
    """C(phi_AB) - C(rho_A) - C(rho_B) with the marginal path recorded per subsystem.

    A negative gap is certified only when both marginal terms are exact; a
    non-negative gap stays certified when a term is an upper bound.
    """
    measure = MeasureId(measure)
    method = MarginalMethod(method)
    slack = get_numeric_slack() if slack is None else slack
    lhs = pure_coherence(measure, phi.flatten(), literal)

    value_a, path_a, exact_a = _marginal_term(
        measure, partial_trace(phi, Subsystem.A), conditional_decomposition(phi, Subsystem.B), config, method, literal
    )
    value_b, path_b, exact_b = _marginal_term(
        measure, partial_trace(phi, Subsystem.B), conditional_decomposition(phi, Subsystem.A), config, method, literal
    )
    rhs_terms = [("C_rho_A", value_a), ("C_rho_B", value_b)]

    gap = lhs - value_a - value_b
    if exact_a and exact_b:
        certification = Certification.EXACT
    elif gap >= -slack:
        certification = Certification.UPPER_BOUNDED_RHS
    else:
        certification = Certification.ESTIMATED
    logger.debug(f"{measure.value} full gap {gap:.6g} via {path_a}/{path_b} ({certification.value})")
    return _report(
        measure,
        Condition.FULL_EQ1,
        phi,
        lhs,
        rhs_terms,
        certification,
        slack,
        label,
        literal,
        marginal_paths={"A": path_a, "B": path_b},
    )


def run_condition(
    condition: Condition,
    measure: MeasureId,
    phi: BipartitePureState,
    config: Optional[RoofConfig] = None,
    literal: bool = False,
    slack: Optional[float] = None,
    label: Optional[str] = None,
) -> CheckReport:
    """Dispatch one of the three checks."""
    condition = Condition(condition)
    if condition is Condition.THEOREM3:
        return theorem_condition_check(measure, phi, literal, slack, label)
    if condition is Condition.ALT24:
        return alt_condition_check(measure, phi, literal, slack, label)
    return full_superadditivity_gap(measure, phi, config, MarginalMethod.AUTO, literal, slack, label)


def concurrence_cross_term_bound(phi: BipartitePureState) -> float:
    """max over rows i != j of sqrt(sum_kl |c_ik c_jl|^2) - sum_kl |c_ik c_jl|.

    Non-positive whenever the termwise bound behind the concurrence
    condition holds; 0.0 for a single row.
    """
    magnitudes = np.abs(phi.coeffs)
    worst = -np.inf
    for i in range(phi.dim_a):
        for j in range(phi.dim_a):
            if i == j:
                continue
            products = np.outer(magnitudes[i], magnitudes[j])
            worst = max(worst, float(np.sqrt(np.sum(products ** 2)) - np.sum(products)))
    return 0.0 if worst == -np.inf else worst
