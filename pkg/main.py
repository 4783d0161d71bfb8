"""Main entry point for the coherence superadditivity toolkit."""

import argparse
import logging
import sys

from src.config import MAX_SUBSYSTEM_DIM, get_log_level, get_roof_config
from src.harness import (
    DimensionLimitError,
    ReportDocument,
    SearchSpec,
    StateFileError,
    cmd_evaluate,
    cmd_reproduce_paper,
    load_state,
    run_search,
    save_state,
    write_report,
)
from src.measures import MeasureId
from src.state import BipartitePureState
from src.superadditivity import (
    Condition,
    MarginalMethod,
    alt_condition_check,
    full_superadditivity_gap,
    theorem_condition_check,
)

EXIT_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_DIMENSION_LIMIT = 3


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for sampling and roof restarts (CLI > env:COHERENCE_ROOF_SEED > 0)")
    common.add_argument("--tol-slack", type=float, default=None, help="Slack for the 'satisfied' verdict (default env:COHERENCE_NUMERIC_SLACK or 1e-9)")
    common.add_argument("--output", default=None, help="Write the report to this path instead of stdout")
    common.add_argument("--csv", action="store_true", help="Emit a flat CSV table instead of JSON")
    common.add_argument("--no-timestamp", action="store_true", help="Blank the timestamp so reports are byte-identical")
    common.add_argument("--literal-linear-entropy", action="store_true", help="Evaluate linear entropy as sum |c_i|^4")
    common.add_argument("--ensemble-size", type=int, default=None)
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--max-iters", type=int, default=None)
    common.add_argument("--tol", type=float, default=None, help="Roof step tolerance")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(
        description="Convex-roof coherence measures and superadditivity checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("reproduce", parents=[common], help="Run the fixed reproduction suite")

    search = sub.add_parser("search", parents=[common], help="Random search for violations")
    search.add_argument("--measure", required=True)
    search.add_argument("--dim-a", type=int, default=2)
    search.add_argument("--dim-b", type=int, default=2)
    search.add_argument("--trials", type=int, default=1000)
    search.add_argument("--condition", default=Condition.THEOREM3.value, help="Theorem3, Alt24 or FullEq1")
    search.add_argument("--save-argmin", default=None, help="Write the arg-min state to this state file")

    evaluate = sub.add_parser("evaluate", parents=[common], help="Coherence of one state file")
    evaluate.add_argument("--measure", required=True)
    evaluate.add_argument("state_file")

    check = sub.add_parser("check", parents=[common], help="All three checks on one bipartite pure state")
    check.add_argument("--measure", required=True)
    check.add_argument("--method", default=MarginalMethod.AUTO.value, choices=[m.value for m in MarginalMethod])
    check.add_argument("state_file")
    return parser


def _roof_config(args: argparse.Namespace):
    return get_roof_config(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iters=args.max_iters,
        step_tolerance=args.tol,
        seed=args.seed,
    )


def run(args: argparse.Namespace) -> int:
    config = _roof_config(args)
    timestamp = not args.no_timestamp
    literal = args.literal_linear_entropy

    if args.command == "reproduce":
        document = cmd_reproduce_paper(seed=config.seed, config=config, slack=args.tol_slack, timestamp=timestamp)
        write_report(document, args.output, args.csv)
        failed = [check.name for check in document.checks if not check.passed]
        if failed:
            print(f"Reproduction failed: {', '.join(failed)}", file=sys.stderr)
            return EXIT_FAILURE
        return 0

    measure = MeasureId.parse(args.measure)

    if args.command == "search":
        for dim in (args.dim_a, args.dim_b):
            if dim > MAX_SUBSYSTEM_DIM:
                raise DimensionLimitError(f"dimension {dim} exceeds the limit of {MAX_SUBSYSTEM_DIM} per subsystem")
        spec = SearchSpec(
            measure=measure,
            dim_a=args.dim_a,
            dim_b=args.dim_b,
            trials=args.trials,
            seed=config.seed,
            condition=Condition.parse(args.condition),
        )
        document, argmin_state = run_search(spec, config, literal, args.tol_slack, timestamp)
        write_report(document, args.output, args.csv)
        if args.save_argmin:
            save_state(args.save_argmin, argmin_state)
        return 0

    if args.command == "evaluate":
        entry = cmd_evaluate(measure, args.state_file, config, literal)
        document = ReportDocument.build("evaluate", evaluations=[entry], timestamp=timestamp)
        write_report(document, args.output, args.csv)
        return 0

    loaded = load_state(args.state_file)
    if not isinstance(loaded.state, BipartitePureState):
        raise StateFileError(f"check needs a bipartite_pure state, got {loaded.kind!r}", "kind")
    phi = loaded.state
    entries = [
        theorem_condition_check(measure, phi, literal, args.tol_slack),
        alt_condition_check(measure, phi, literal, args.tol_slack),
        full_superadditivity_gap(measure, phi, config, MarginalMethod(args.method), literal, args.tol_slack),
    ]
    write_report(ReportDocument.build("check", entries=entries, timestamp=timestamp), args.output, args.csv)
    return 0


def main(argv=None) -> int:
    """Parse arguments, run one verb and map failures to exit codes."""
    logging.basicConfig(level=get_log_level(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except DimensionLimitError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DIMENSION_LIMIT
    except StateFileError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
