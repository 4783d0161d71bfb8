import json
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from pydantic import ValidationError

from main import main
from src.harness import (
    DimensionLimitError,
    ExpectationCheck,
    ReportDocument,
    SearchSpec,
    StateFileError,
    cmd_evaluate,
    cmd_search,
    load_state,
    run_search,
    save_state,
)
from src.harness.fixtures import fixture_names, fixture_state, squared_amplitudes
from src.harness.io import StateFile, parse_state
from src.harness.reproduce import random_sample
from src.harness.runner import ENTRY_COLUMNS, EVALUATION_COLUMNS, render_csv, render_json
from src.measures import MeasureId
from src.roof import RoofConfig
from src.state import BipartitePureState, DensityMatrix, PureState
from src.superadditivity import Certification, Condition, theorem_condition_check

CHEAP_ROOF = RoofConfig(restarts=1, max_iters=20)


def _write(path, document: dict):
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


# fixtures

def test_fixtures_are_exact_and_normalized():
    assert set(fixture_names()) >= {"uniform_2x2", "half_entropy_counterexample", "uniform_3x3"}
    for name in fixture_names():
        assert sum(squared_amplitudes(name)) == 1
    assert squared_amplitudes("half_entropy_counterexample")[0] == Fraction(53, 100)


def test_unknown_fixture():
    with pytest.raises(ValueError, match="uniform_2x2"):
        fixture_state("nope")


def test_random_sample_cycles_dimensions():
    sample = random_sample(0, 9)
    assert [(phi.dim_a, phi.dim_b) for phi in sample[:4]] == [(2, 2), (3, 2), (4, 2), (2, 3)]
    assert np.array_equal(random_sample(0, 3)[2].coeffs, sample[2].coeffs)


# state files

def test_pure_vector_is_normalized_and_factor_recorded():
    loaded = parse_state(StateFile(kind="pure", dims=[2], amplitudes=[(3.0, 0.0), (0.0, 4.0)]))
    assert isinstance(loaded.state, PureState)
    assert loaded.normalization_factor == pytest.approx(0.2)
    assert_allclose(loaded.state.weights, [0.36, 0.64], atol=1e-15)


def test_density_is_rescaled_to_unit_trace():
    entries = [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]
    loaded = parse_state(StateFile(kind="density", dims=[2], entries=entries))
    assert isinstance(loaded.state, DensityMatrix)
    assert loaded.normalization_factor == pytest.approx(0.5)
    assert_allclose(loaded.state.matrix, np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize(
    "document, field",
    [
        ({"kind": "pure", "dims": [2, 2], "amplitudes": [[1, 0]] * 4}, "dims"),
        ({"kind": "bipartite_pure", "dims": [2, 2], "amplitudes": [[1, 0]] * 3}, "amplitudes"),
        ({"kind": "pure", "dims": [2], "amplitudes": [[0, 0], [0, 0]]}, "amplitudes"),
        ({"kind": "density", "dims": [2]}, "entries"),
        ({"kind": "density", "dims": [2], "entries": [[0.5, 0], [0.2, 0], [0.1, 0], [0.5, 0]]}, "entries"),
        ({"kind": "mixed", "dims": [2]}, "kind"),
    ],
)
def test_state_file_errors_name_the_field(tmp_path, document, field):
    path = _write(tmp_path / "state.json", document)
    with pytest.raises(StateFileError) as excinfo:
        load_state(path)
    assert excinfo.value.field == field


def test_missing_state_file(tmp_path):
    with pytest.raises(StateFileError) as excinfo:
        load_state(tmp_path / "missing.json")
    assert excinfo.value.field == "path"


def test_dimension_limit(tmp_path):
    path = _write(tmp_path / "big.json", {"kind": "pure", "dims": [17], "amplitudes": [[1, 0]] * 17})
    with pytest.raises(DimensionLimitError):
        load_state(path)


def test_saved_bipartite_state_loads_back(tmp_path, half_entropy_state):
    path = save_state(tmp_path / "nested" / "phi.json", half_entropy_state)
    loaded = load_state(path)
    assert loaded.kind == "bipartite_pure"
    assert loaded.normalization_factor == pytest.approx(1.0, abs=1e-12)
    assert_allclose(loaded.state.coeffs, half_entropy_state.coeffs, atol=1e-15)


# reports

def test_build_summarizes_entries(uniform_state):
    entries = [
        theorem_condition_check(MeasureId.FORMATION, uniform_state),
        theorem_condition_check(MeasureId.GEOMETRIC, uniform_state),
        theorem_condition_check(MeasureId.GEOMETRIC, uniform_state, label="again"),
    ]
    checks = [ExpectationCheck.equal("ok", 1.0, 1.0, 0.0), ExpectationCheck.below("bad", 2.0, 1.0)]
    document = ReportDocument.build("check", entries=entries, checks=checks, timestamp=False)
    assert document.summary.min_gap == pytest.approx(-0.25)
    assert document.summary.violation_count == 2
    assert document.summary.checks_failed == 1
    assert document.summary.argmin_digest == entries[1].state_digest
    assert document.timestamp == ""
    assert not document.passed


def test_summary_must_match_entries(uniform_state):
    entry = theorem_condition_check(MeasureId.GEOMETRIC, uniform_state)
    with pytest.raises(ValidationError, match="min_gap"):
        ReportDocument(command="check", entries=[entry])


def test_expectation_relations():
    assert ExpectationCheck.at_least("a", -1e-10, -1e-9).passed
    assert not ExpectationCheck.below("b", 0.0, 0.0).passed
    assert ExpectationCheck.info("c", 123.0).passed
    assert not ExpectationCheck.equal("d", 1.0, 1.1, 0.05).passed


def test_expectation_checks_hold_plain_bools_for_numpy_inputs():
    observed = np.float64(0.5)
    checks = [
        ExpectationCheck.equal("e", observed, 0.5, 1e-12),
        ExpectationCheck.below("b", observed, np.float64(1.0)),
        ExpectationCheck.at_least("a", observed, 0.0),
    ]
    assert all(type(check.passed) is bool and check.passed for check in checks)


def test_search_spec_bounds():
    with pytest.raises(ValidationError):
        SearchSpec(measure=MeasureId.FORMATION, dim_a=1, dim_b=2, trials=1)
    with pytest.raises(ValidationError):
        SearchSpec(measure=MeasureId.FORMATION, dim_a=2, dim_b=2, trials=0)


def test_csv_headers(uniform_state):
    entry = theorem_condition_check(MeasureId.GEOMETRIC, uniform_state)
    lines = render_csv(ReportDocument.build("check", entries=[entry], timestamp=False)).splitlines()
    assert lines[0] == ",".join(ENTRY_COLUMNS)
    assert lines[1].startswith("geometric,Theorem3,")
    empty = render_csv(ReportDocument.build("evaluate", timestamp=False))
    assert empty.splitlines() == [",".join(ENTRY_COLUMNS)]


# search

def test_search_is_deterministic():
    spec = SearchSpec(measure=MeasureId.GEOMETRIC, dim_a=2, dim_b=3, trials=50, seed=7)
    first, state = run_search(spec, timestamp=False)
    second, _ = run_search(spec, timestamp=False)
    assert render_json(first) == render_json(second)
    assert isinstance(state, BipartitePureState)
    assert (state.dim_a, state.dim_b) == (2, 3)


def test_cmd_search_returns_the_document():
    spec = SearchSpec(measure=MeasureId.FIDELITY, dim_a=2, dim_b=2, trials=10, seed=3)
    assert render_json(cmd_search(spec, timestamp=False)) == render_json(run_search(spec, timestamp=False)[0])


def test_formation_search_finds_no_violations():
    spec = SearchSpec(measure=MeasureId.FORMATION, dim_a=3, dim_b=2, trials=200, seed=1)
    document, _ = run_search(spec, timestamp=False)
    assert document.summary.violation_count == 0
    assert len(document.entries) == 1
    assert document.entries[0].label.startswith("trial_")


def test_geometric_search_finds_violations():
    spec = SearchSpec(measure=MeasureId.GEOMETRIC, dim_a=2, dim_b=2, trials=1000, seed=0)
    document, argmin = run_search(spec, timestamp=False)
    assert document.summary.violation_count >= 1
    assert document.summary.min_gap <= -0.05
    assert theorem_condition_check(MeasureId.GEOMETRIC, argmin).gap == pytest.approx(document.summary.min_gap)


def test_search_over_alternative_condition():
    spec = SearchSpec(measure=MeasureId.CONCURRENCE, dim_a=2, dim_b=2, trials=20, condition=Condition.ALT24)
    document, _ = run_search(spec, timestamp=False)
    assert all(entry.condition is Condition.ALT24 for entry in document.entries)


# evaluate

def test_evaluate_pure_plus_state(tmp_path):
    path = save_state(tmp_path / "plus.json", PureState.maximally_coherent(2))
    entry = cmd_evaluate(MeasureId.FORMATION, path)
    assert entry.value == pytest.approx(1.0, abs=1e-12)
    assert entry.certification is Certification.EXACT
    assert entry.kind == "pure"


def test_evaluate_maximally_mixed_qubit(tmp_path):
    path = save_state(tmp_path / "mixed.json", DensityMatrix(matrix=np.eye(2) / 2))
    entry = cmd_evaluate(MeasureId.FORMATION, path, CHEAP_ROOF)
    assert entry.value == pytest.approx(0.0, abs=1e-10)
    assert entry.certification is Certification.UPPER_BOUND
    assert entry.closed_form == pytest.approx(0.0, abs=1e-12)
    assert entry.closed_form_exact


def test_evaluate_reports_half_entropy_closed_form(tmp_path, qubit_t06):
    path = save_state(tmp_path / "t06.json", qubit_t06)
    entry = cmd_evaluate(MeasureId.HALF_ENTROPY, path, CHEAP_ROOF)
    assert entry.closed_form == pytest.approx(np.log2(1.6), abs=1e-12)
    assert entry.closed_form_exact is False
    assert entry.dim == 2


@pytest.mark.slow
def test_half_entropy_roof_does_not_exceed_closed_form(tmp_path, qubit_t06):
    path = save_state(tmp_path / "t06.json", qubit_t06)
    entry = cmd_evaluate(MeasureId.HALF_ENTROPY, path, RoofConfig(restarts=8))
    assert entry.value <= entry.closed_form + 1e-4


def test_evaluation_csv(tmp_path):
    path = save_state(tmp_path / "plus.json", PureState.maximally_coherent(3))
    document = ReportDocument.build("evaluate", evaluations=[cmd_evaluate(MeasureId.CONCURRENCE, path)], timestamp=False)
    lines = render_csv(document).splitlines()
    assert lines[0] == ",".join(EVALUATION_COLUMNS)
    assert lines[1].startswith("concurrence,pure,3,")
    assert lines[1].split(",")[4] == "Exact"


# command line

def test_check_command(tmp_path, capsys, uniform_state):
    path = save_state(tmp_path / "phi.json", uniform_state)
    assert main(["check", "--measure", "geometric", "--no-timestamp", str(path)]) == 0
    document = json.loads(capsys.readouterr().out)
    assert [entry["condition"] for entry in document["entries"]] == ["Theorem3", "Alt24", "FullEq1"]
    assert document["summary"]["min_gap"] == pytest.approx(-0.25)
    assert document["timestamp"] == ""


def test_search_command_writes_output_and_argmin(tmp_path):
    report, argmin = tmp_path / "report.csv", tmp_path / "argmin.json"
    argv = ["search", "--measure", "geometric", "--trials", "30", "--csv", "--output", str(report), "--save-argmin", str(argmin)]
    assert main(argv) == 0
    assert report.read_text(encoding="utf-8").startswith(",".join(ENTRY_COLUMNS))
    assert load_state(argmin).kind == "bipartite_pure"


def test_evaluate_command(tmp_path, capsys):
    path = save_state(tmp_path / "plus.json", PureState.maximally_coherent(4))
    assert main(["evaluate", "--measure", "concurrence", str(path)]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["evaluations"][0]["value"] == pytest.approx(3.0)


def test_unknown_measure_exits_with_failure(capsys):
    assert main(["search", "--measure", "renyi", "--trials", "1"]) == 1
    assert "renyi" in capsys.readouterr().err


def test_unreadable_state_file_exits_with_parse_error(tmp_path, capsys):
    assert main(["evaluate", "--measure", "formation", str(tmp_path / "missing.json")]) == 2
    assert "path" in capsys.readouterr().err


def test_check_rejects_density_input(tmp_path):
    path = save_state(tmp_path / "rho.json", DensityMatrix(matrix=np.eye(2) / 2))
    assert main(["check", "--measure", "formation", str(path)]) == 2


def test_dimension_limit_exit_code(tmp_path):
    assert main(["search", "--measure", "formation", "--dim-a", "17", "--trials", "1"]) == 3
    path = _write(tmp_path / "big.json", {"kind": "pure", "dims": [17], "amplitudes": [[1, 0]] * 17})
    assert main(["evaluate", "--measure", "formation", str(path)]) == 3


@pytest.mark.slow
def test_reproduce_command_passes(tmp_path):
    output = tmp_path / "reproduce.json"
    assert main(["reproduce", "--restarts", "2", "--no-timestamp", "--output", str(output)]) == 0
    document = json.loads(output.read_text(encoding="utf-8"))
    assert document["summary"]["checks_failed"] == 0
    assert document["summary"]["violation_count"] > 0
