"""Fixed reproduction suite for the published equalities and counterexamples.

Every case returns the CheckReports it produced plus ExpectationChecks that
compare observed numbers with their exact values; the suite passes when
every expectation passes.
"""

import logging
from typing import Callable, Optional

import numpy as np

from ..channel import build_theorem_channel, channel_monotonicity_gap, channel_reproduces_marginal
from ..core import haar_random_bipartite, marginal_pure_state
from ..measures import MeasureId, max_incoherent_fidelity, pure_coherence
from ..roof import RoofConfig
from ..state import BipartitePureState
from ..superadditivity import (
    CheckReport,
    Certification,
    MarginalMethod,
    concurrence_cross_term_bound,
    full_superadditivity_gap,
    theorem_condition_check,
)
from ..utils import seed_to_int, spawn_seeds, track_performance
from .fixtures import fixture_state
from .models import ExpectationCheck, ReportDocument

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
SYMBOLIC_TOLERANCE = 1e-10
PUBLISHED_GAP = -0.0096
PUBLISHED_GAP_TOLERANCE = 5e-5
SAMPLE_DIMS = (2, 3, 4)

CaseResult = tuple[list[CheckReport], list[ExpectationCheck]]


def half_entropy_expected() -> dict[str, float]:
    """Symbolic values for the half-entropy counterexample."""
    s3, s22, s53 = np.sqrt(3.0), np.sqrt(22.0), np.sqrt(53.0)
    return {
        "lhs": 2.0 * np.log2((s53 + s3 + 2.0 * s22) / 10.0),
        "marginal_A_pure": 2.0 * np.log2((1.0 + s3) / 2.0),
        "avg_B": 1.5 * np.log2((s53 + s22) / (5.0 * s3)) + 0.5 * np.log2((s22 + s3) / 5.0),
    }


def random_sample(seed: int, count: int, dims: tuple[int, ...] = SAMPLE_DIMS) -> list[BipartitePureState]:
    """Haar-random bipartite states cycling d_A, d_B over ``dims``."""
    states = []
    for index, child in enumerate(spawn_seeds(seed, count)):
        dim_a = dims[index % len(dims)]
        dim_b = dims[(index // len(dims)) % len(dims)]
        states.append(haar_random_bipartite(dim_a, dim_b, seed_to_int(child)))
    return states


def _expect_terms(prefix: str, report: CheckReport, lhs: float, terms: dict[str, float], tol: float) -> list[ExpectationCheck]:
    checks = [ExpectationCheck.equal(f"{prefix}_lhs", report.lhs, lhs, tol)]
    for label, value in terms.items():
        checks.append(ExpectationCheck.equal(f"{prefix}_{label}", report.term(label), value, tol))
    return checks


@track_performance
def formation_case(sample: list[BipartitePureState], slack: Optional[float]) -> CaseResult:
    entries = [
        theorem_condition_check(MeasureId.FORMATION, fixture_state(name), slack=slack, label=f"formation_equality_{name}")
        for name in ("uniform_2x2", "half_entropy_counterexample", "uniform_3x3")
    ]
    worst = max(abs(theorem_condition_check(MeasureId.FORMATION, phi, slack=slack).gap) for phi in sample)
    checks = [ExpectationCheck.below("formation_equality_max_abs_gap", worst, SYMBOLIC_TOLERANCE)]
    checks += [ExpectationCheck.below(f"{entry.label}_abs_gap", abs(entry.gap), SYMBOLIC_TOLERANCE) for entry in entries]
    return entries, checks


@track_performance
def concurrence_case(sample: list[BipartitePureState], slack: Optional[float]) -> CaseResult:
    names = ("uniform_2x2", "half_entropy_counterexample", "maximally_entangled_2x2", "uniform_3x3")
    entries = [
        theorem_condition_check(MeasureId.CONCURRENCE, fixture_state(name), slack=slack, label=f"concurrence_{name}")
        for name in names
    ]
    checks = [ExpectationCheck.at_least(f"{entry.label}_gap", entry.gap, -1e-9) for entry in entries]
    minimum = min(theorem_condition_check(MeasureId.CONCURRENCE, phi, slack=slack).gap for phi in sample)
    checks.append(ExpectationCheck.at_least("concurrence_random_min_gap", minimum, -1e-9))
    cross = max(concurrence_cross_term_bound(phi) for phi in sample[:50])
    checks.append(ExpectationCheck.below("concurrence_cross_term_max", cross, 1e-12))
    return entries, checks


@track_performance
def geometric_case(slack: Optional[float]) -> CaseResult:
    phi = fixture_state("uniform_2x2")
    report = theorem_condition_check(MeasureId.GEOMETRIC, phi, slack=slack, label="geometric_counterexample")
    full = full_superadditivity_gap(MeasureId.GEOMETRIC, phi, slack=slack, label="geometric_full_gap")
    checks = _expect_terms("geometric", report, 0.75, {"marginal_A_pure": 0.5, "avg_B": 0.5}, EXACT_TOLERANCE)
    checks += [
        ExpectationCheck.equal("geometric_rhs", report.rhs_sum, 1.0, EXACT_TOLERANCE),
        ExpectationCheck.equal("geometric_full_gap", full.gap, -0.25, EXACT_TOLERANCE),
        ExpectationCheck.equal(
            "geometric_full_gap_exact", float(full.certification is Certification.EXACT), 1.0, 0.0
        ),
    ]
    return [report, full], checks


@track_performance
def fidelity_case(slack: Optional[float]) -> CaseResult:
    phi = fixture_state("uniform_2x2")
    report = theorem_condition_check(MeasureId.FIDELITY, phi, slack=slack, label="fidelity_counterexample")
    half_root = 1.0 / np.sqrt(2.0)
    checks = _expect_terms(
        "fidelity", report, np.sqrt(3.0) / 2.0, {"marginal_A_pure": half_root, "avg_B": half_root}, EXACT_TOLERANCE
    )
    checks.append(ExpectationCheck.equal("fidelity_rhs", report.rhs_sum, np.sqrt(2.0), EXACT_TOLERANCE))
    # Closed form against a direct maximization over incoherent states.
    numeric = np.sqrt(max(0.0, 1.0 - max_incoherent_fidelity(phi.flatten())))
    checks.append(ExpectationCheck.equal("fidelity_closed_form_confirmed", numeric, report.lhs, 1e-6))
    return [report], checks


@track_performance
def linear_entropy_case(slack: Optional[float]) -> CaseResult:
    phi = fixture_state("uniform_2x2")
    literal = theorem_condition_check(
        MeasureId.LINEAR_ENTROPY, phi, literal=True, slack=slack, label="linear_entropy_counterexample_literal"
    )
    corrected = theorem_condition_check(
        MeasureId.LINEAR_ENTROPY, phi, slack=slack, label="linear_entropy_counterexample"
    )
    checks = _expect_terms(
        "linear_entropy_literal", literal, 0.25, {"marginal_A_pure": 0.5, "avg_B": 0.5}, EXACT_TOLERANCE
    )
    checks += _expect_terms(
        "linear_entropy", corrected, 0.75, {"marginal_A_pure": 0.5, "avg_B": 0.5}, EXACT_TOLERANCE
    )
    checks += [
        ExpectationCheck.below("linear_entropy_literal_gap", literal.gap, 0.0),
        ExpectationCheck.below("linear_entropy_gap", corrected.gap, 0.0),
    ]
    # Marginal value under both readings, for comparison with the published figure.
    marginal = marginal_pure_state(phi)
    checks += [
        ExpectationCheck.info("linear_entropy_marginal_fidelity_value", pure_coherence(MeasureId.FIDELITY, marginal)),
        ExpectationCheck.info(
            "linear_entropy_marginal_linear_value", pure_coherence(MeasureId.LINEAR_ENTROPY, marginal, literal=True)
        ),
    ]
    return [literal, corrected], checks


@track_performance
def half_entropy_case(config: Optional[RoofConfig], slack: Optional[float]) -> CaseResult:
    phi = fixture_state("half_entropy_counterexample")
    expected = half_entropy_expected()
    report = theorem_condition_check(MeasureId.HALF_ENTROPY, phi, slack=slack, label="half_entropy_counterexample")
    closed = full_superadditivity_gap(
        MeasureId.HALF_ENTROPY, phi, config, MarginalMethod.CLOSED_FORM, slack=slack, label="half_entropy_full_gap"
    )
    roof = full_superadditivity_gap(
        MeasureId.HALF_ENTROPY, phi, config, MarginalMethod.ROOF, slack=slack, label="half_entropy_full_gap_roof"
    )
    checks = _expect_terms(
        "half_entropy",
        report,
        expected["lhs"],
        {key: expected[key] for key in ("marginal_A_pure", "avg_B")},
        SYMBOLIC_TOLERANCE,
    )
    checks += [
        ExpectationCheck.below("half_entropy_theorem_gap", report.gap, 0.0),
        ExpectationCheck.equal("half_entropy_full_gap", closed.gap, PUBLISHED_GAP, PUBLISHED_GAP_TOLERANCE),
        ExpectationCheck.info("half_entropy_full_gap_roof", roof.gap),
    ]
    return [report, closed, roof], checks


@track_performance
def channel_case(sample_seed: int) -> CaseResult:
    checks = []
    for name in ("uniform_2x2", "half_entropy_counterexample", "product_basis", "product_basis_plus"):
        checks.append(
            ExpectationCheck.equal(
                f"channel_{name}", float(channel_reproduces_marginal(fixture_state(name))), 1.0, 0.0
            )
        )

    random_states = random_sample(sample_seed, 100, dims=(3,))
    reproduced = sum(channel_reproduces_marginal(phi) for phi in random_states)
    operators = max(len(build_theorem_channel(phi).operators) for phi in random_states)
    checks += [
        ExpectationCheck.equal("channel_random_reproduced", float(reproduced), 100.0, 0.0),
        ExpectationCheck.info("channel_random_max_operators", float(operators)),
    ]

    qubit_states = random_sample(sample_seed + 1, 100, dims=(2,))
    for measure in MeasureId:
        gaps = [channel_monotonicity_gap(measure, phi) for phi in qubit_states]
        available = [gap for gap in gaps if gap is not None]
        if available:
            checks.append(ExpectationCheck.at_least(f"channel_monotonicity_{measure.value}", min(available), -1e-6))
    return [], checks


@track_performance
def cmd_reproduce_paper(
    seed: int = 0,
    config: Optional[RoofConfig] = None,
    slack: Optional[float] = None,
    timestamp: bool = True,
) -> ReportDocument:
    """Run the fixed suite; ``document.passed`` is False when any expectation fails."""
    sample = random_sample(seed, 500)
    cases: list[Callable[[], CaseResult]] = [
        lambda: formation_case(sample, slack),
        lambda: concurrence_case(sample, slack),
        lambda: geometric_case(slack),
        lambda: fidelity_case(slack),
        lambda: linear_entropy_case(slack),
        lambda: half_entropy_case(config, slack),
        lambda: channel_case(seed),
    ]
    entries: list[CheckReport] = []
    checks: list[ExpectationCheck] = []
    for case in cases:
        case_entries, case_checks = case()
        entries += case_entries
        checks += case_checks

    for check in checks:
        if not check.passed:
            logger.warning(f"expectation {check.name} failed: observed {check.observed!r}, expected {check.expected!r}")
    return ReportDocument.build("reproduce", entries=entries, checks=checks, timestamp=timestamp)
