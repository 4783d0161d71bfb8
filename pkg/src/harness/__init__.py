"""Command surfaces: reproduction suite, random search, single-state evaluation."""

from .evaluate import cmd_evaluate, evaluate_state
from .io import DimensionLimitError, StateFileError, load_state, save_state
from .models import EvaluationEntry, ExpectationCheck, ReportDocument, ReportSummary, SearchSpec
from .reproduce import cmd_reproduce_paper
from .runner import write_report
from .search import cmd_search, run_search

__all__ = [
    "DimensionLimitError",
    "EvaluationEntry",
    "ExpectationCheck",
    "ReportDocument",
    "ReportSummary",
    "SearchSpec",
    "StateFileError",
    "cmd_evaluate",
    "cmd_reproduce_paper",
    "cmd_search",
    "evaluate_state",
    "load_state",
    "run_search",
    "save_state",
    "write_report",
]
