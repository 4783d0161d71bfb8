import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from src.core import haar_random_bipartite, haar_random_pure
from src.harness.fixtures import fixture_state
from src.harness.reproduce import half_entropy_expected
from src.measures import MeasureId
from src.roof import RoofConfig
from src.state import BipartitePureState, PureState
from src.superadditivity import (
    Certification,
    CheckReport,
    Condition,
    MarginalMethod,
    alt_condition_check,
    concurrence_cross_term_bound,
    full_superadditivity_gap,
    run_condition,
    theorem_condition_check,
)

seeds = st.integers(min_value=0, max_value=2 ** 32)
dims = st.sampled_from([2, 3, 4])
CHEAP_ROOF = RoofConfig(restarts=1, max_iters=20)


@settings(max_examples=80, deadline=None)
@given(seed=seeds, dim_a=dims, dim_b=dims)
def test_formation_condition_is_an_equality(seed, dim_a, dim_b):
    report = theorem_condition_check(MeasureId.FORMATION, haar_random_bipartite(dim_a, dim_b, seed))
    assert abs(report.gap) < 1e-10
    assert report.satisfied
    assert report.certification is Certification.EXACT


@settings(max_examples=80, deadline=None)
@given(seed=seeds, dim_a=dims, dim_b=dims)
def test_concurrence_condition_always_holds(seed, dim_a, dim_b):
    phi = haar_random_bipartite(dim_a, dim_b, seed)
    assert theorem_condition_check(MeasureId.CONCURRENCE, phi).gap >= -1e-9
    assert concurrence_cross_term_bound(phi) <= 1e-12


def test_geometric_counterexample(uniform_state):
    report = theorem_condition_check(MeasureId.GEOMETRIC, uniform_state)
    assert report.lhs == pytest.approx(0.75, abs=1e-12)
    assert report.term("marginal_A_pure") == pytest.approx(0.5, abs=1e-12)
    assert report.term("avg_B") == pytest.approx(0.5, abs=1e-12)
    assert report.gap == pytest.approx(-0.25, abs=1e-12)
    assert not report.satisfied
    assert report.label == "geometric_Theorem3"


def test_fidelity_counterexample(uniform_state):
    report = theorem_condition_check(MeasureId.FIDELITY, uniform_state)
    assert report.lhs == pytest.approx(np.sqrt(3) / 2, abs=1e-12)
    assert report.rhs_sum == pytest.approx(np.sqrt(2), abs=1e-12)
    assert not report.satisfied


def test_linear_entropy_counterexample_in_both_readings(uniform_state):
    literal = theorem_condition_check(MeasureId.LINEAR_ENTROPY, uniform_state, literal=True)
    corrected = theorem_condition_check(MeasureId.LINEAR_ENTROPY, uniform_state)
    assert literal.lhs == pytest.approx(0.25, abs=1e-12)
    assert literal.literal
    assert corrected.lhs == pytest.approx(0.75, abs=1e-12)
    assert literal.gap < 0 and corrected.gap < 0


def test_half_entropy_counterexample(half_entropy_state):
    expected = half_entropy_expected()
    report = theorem_condition_check(MeasureId.HALF_ENTROPY, half_entropy_state)
    assert report.lhs == pytest.approx(expected["lhs"], abs=1e-10)
    assert report.term("marginal_A_pure") == pytest.approx(expected["marginal_A_pure"], abs=1e-10)
    assert report.term("avg_B") == pytest.approx(expected["avg_B"], abs=1e-10)
    assert report.gap < 0


def test_half_entropy_full_gap_from_closed_forms(half_entropy_state):
    report = full_superadditivity_gap(MeasureId.HALF_ENTROPY, half_entropy_state, method=MarginalMethod.CLOSED_FORM)
    assert report.gap == pytest.approx(-0.0096, abs=5e-5)
    assert report.term("C_rho_A") == pytest.approx(0.88394, abs=5e-5)
    assert report.marginal_paths == {"A": "closed-form", "B": "closed-form"}
    assert report.certification is Certification.ESTIMATED
    assert not report.satisfied


def test_geometric_full_gap_is_exact(uniform_state):
    report = full_superadditivity_gap(MeasureId.GEOMETRIC, uniform_state)
    assert report.gap == pytest.approx(-0.25, abs=1e-12)
    assert report.marginal_paths == {"A": "pure", "B": "pure"}
    assert report.certification is Certification.EXACT


def test_formation_full_gap_of_product_state():
    report = full_superadditivity_gap(MeasureId.FORMATION, fixture_state("product_basis_plus"))
    assert report.gap == pytest.approx(0.0, abs=1e-12)
    assert report.term("C_rho_B") == pytest.approx(1.0, abs=1e-12)
    assert report.certification is Certification.EXACT


def test_auto_uses_exact_qubit_forms():
    phi = haar_random_bipartite(2, 2, 17)
    report = full_superadditivity_gap(MeasureId.CONCURRENCE, phi)
    assert report.marginal_paths == {"A": "closed-form", "B": "closed-form"}
    assert report.certification is Certification.EXACT


def test_roof_marginals_are_never_certified_exact():
    phi = haar_random_bipartite(3, 3, 2)
    report = full_superadditivity_gap(MeasureId.GEOMETRIC, phi, CHEAP_ROOF, MarginalMethod.ROOF)
    assert set(report.marginal_paths.values()) <= {"roof", "roof-branches"}
    assert report.certification is not Certification.EXACT
    if report.gap >= -report.numeric_slack:
        assert report.certification is Certification.UPPER_BOUNDED_RHS


@settings(max_examples=60, deadline=None)
@given(seed=seeds, dim_a=dims, dim_b=dims)
def test_alternative_condition_is_weaker(seed, dim_a, dim_b):
    phi = haar_random_bipartite(dim_a, dim_b, seed)
    for measure in MeasureId:
        theorem = theorem_condition_check(measure, phi)
        alt = alt_condition_check(measure, phi)
        assert alt.lhs == theorem.lhs
        assert alt.term("avg_B") == theorem.term("avg_B")
        assert alt.rhs_sum <= theorem.rhs_sum + 1e-9


@settings(max_examples=40, deadline=None)
@given(seed=seeds, dim_a=dims, dim_b=dims)
def test_alternative_condition_is_tight_on_products_for_additive_measures(seed, dim_a, dim_b):
    phi = BipartitePureState.product(haar_random_pure(dim_a, seed), haar_random_pure(dim_b, seed + 1))
    for measure in (MeasureId.FORMATION, MeasureId.HALF_ENTROPY):
        assert alt_condition_check(measure, phi).gap == pytest.approx(0.0, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, dim_b=st.sampled_from([2, 3]))
def test_satisfied_condition_gives_superadditivity(seed, dim_b):
    phi = haar_random_bipartite(2, dim_b, seed)
    for measure in (m for m in MeasureId if m is not MeasureId.HALF_ENTROPY):
        theorem = theorem_condition_check(measure, phi)
        full = full_superadditivity_gap(measure, phi, CHEAP_ROOF)
        assert full.gap >= theorem.gap - 1e-9
        if theorem.satisfied:
            assert full.satisfied


@pytest.mark.slow
def test_satisfied_condition_gives_superadditivity_for_half_entropy():
    for seed in range(5):
        phi = haar_random_bipartite(3, 3, seed)
        theorem = theorem_condition_check(MeasureId.HALF_ENTROPY, phi)
        full = full_superadditivity_gap(MeasureId.HALF_ENTROPY, phi, RoofConfig(restarts=2, max_iters=100))
        assert full.gap >= theorem.gap - 1e-9


def test_closed_form_needs_an_available_formula():
    phi = haar_random_bipartite(2, 2, 5)
    with pytest.raises(ValueError, match="no qubit closed form"):
        full_superadditivity_gap(MeasureId.LINEAR_ENTROPY, phi, method=MarginalMethod.CLOSED_FORM, literal=True)


def test_closed_form_needs_qubit_marginals():
    phi = haar_random_bipartite(3, 3, 5)
    with pytest.raises(ValueError, match="qubit marginals"):
        full_superadditivity_gap(MeasureId.FORMATION, phi, method=MarginalMethod.CLOSED_FORM)


def test_slack_controls_the_verdict(half_entropy_state):
    strict = full_superadditivity_gap(MeasureId.HALF_ENTROPY, half_entropy_state, method=MarginalMethod.CLOSED_FORM)
    loose = full_superadditivity_gap(
        MeasureId.HALF_ENTROPY, half_entropy_state, method=MarginalMethod.CLOSED_FORM, slack=0.1
    )
    assert not strict.satisfied
    assert loose.satisfied
    assert loose.certification is Certification.UPPER_BOUNDED_RHS


def test_check_report_rejects_inconsistent_fields():
    fields = dict(
        measure=MeasureId.FORMATION,
        condition=Condition.THEOREM3,
        lhs=1.0,
        rhs_terms=[("a", 0.25), ("b", 0.25)],
        certification=Certification.EXACT,
        state_digest="x",
        numeric_slack=1e-9,
    )
    report = CheckReport(gap=0.5, satisfied=True, **fields)
    assert report.rhs_sum == 0.5
    with pytest.raises(KeyError):
        report.term("c")
    with pytest.raises(ValidationError, match="gap"):
        CheckReport(gap=0.4, satisfied=True, **fields)
    with pytest.raises(ValidationError, match="satisfied"):
        CheckReport(gap=0.5, satisfied=False, **fields)


def test_reports_are_tagged_with_the_state_digest(uniform_state):
    first = theorem_condition_check(MeasureId.GEOMETRIC, uniform_state)
    second = alt_condition_check(MeasureId.GEOMETRIC, uniform_state)
    assert first.state_digest == second.state_digest
    assert first.state_digest != theorem_condition_check(MeasureId.GEOMETRIC, fixture_state("product_basis")).state_digest


@pytest.mark.parametrize("name, expected", [("theorem3", Condition.THEOREM3), ("ALT24", Condition.ALT24), ("FullEq1", Condition.FULL_EQ1)])
def test_condition_parse(name, expected):
    assert Condition.parse(name) is expected


def test_condition_parse_rejects_unknown():
    with pytest.raises(ValueError, match="Theorem3"):
        Condition.parse("eq2")


def test_run_condition_dispatch(uniform_state):
    for condition in Condition:
        report = run_condition(condition, MeasureId.GEOMETRIC, uniform_state, label="x")
        assert report.condition is condition
        assert report.label == "x"


def test_cross_term_bound_of_single_row():
    phi = BipartitePureState.product(PureState.basis(1, 0), PureState.maximally_coherent(3))
    assert concurrence_cross_term_bound(phi) == 0.0
