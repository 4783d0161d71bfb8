"""Pydantic models for search specs and report documents."""

from datetime import datetime
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from .. import __version__
from ..config import MAX_SUBSYSTEM_DIM
from ..measures import MeasureId
from ..superadditivity import Certification, CheckReport, Condition

SUMMARY_TOLERANCE = 1e-12


class SearchSpec(BaseModel):
    """Batch random search for violations of one condition."""
    measure: MeasureId
    dim_a: int = Field(..., ge=2, le=MAX_SUBSYSTEM_DIM)
    dim_b: int = Field(..., ge=2, le=MAX_SUBSYSTEM_DIM)
    trials: int = Field(..., ge=1)
    seed: int = 0
    condition: Condition = Condition.THEOREM3

    class Config:
        json_schema_extra = {
            "example": {
                "measure": "geometric",
                "dim_a": 2,
                "dim_b": 2,
                "trials": 1000,
                "seed": 0,
                "condition": "Theorem3",
            }
        }


class ExpectationCheck(BaseModel):
    """Observed value compared against an expected value or bound."""
    name: str
    observed: float
    expected: Optional[float] = None
    tolerance: float = Field(default=0.0, ge=0)
    relation: Literal["equal", "below", "at_least", "info"] = "equal"
    passed: bool

    @classmethod
    def equal(cls, name: str, observed: float, expected: float, tolerance: float) -> "ExpectationCheck":
        return cls(
            name=name, observed=observed, expected=expected, tolerance=tolerance,
            relation="equal", passed=bool(abs(observed - expected) <= tolerance),
        )

    @classmethod
    def below(cls, name: str, observed: float, bound: float) -> "ExpectationCheck":
        return cls(name=name, observed=observed, expected=bound, relation="below", passed=bool(observed < bound))

    @classmethod
    def at_least(cls, name: str, observed: float, bound: float) -> "ExpectationCheck":
        return cls(name=name, observed=observed, expected=bound, relation="at_least", passed=bool(observed >= bound))

    @classmethod
    def info(cls, name: str, observed: float) -> "ExpectationCheck":
        """Reported value without an expectation; always passes."""
        return cls(name=name, observed=observed, relation="info", passed=True)


class EvaluationEntry(BaseModel):
    """Coherence of one state read from a state file."""
    measure: MeasureId
    kind: str
    dim: int
    value: float
    certification: Certification
    closed_form: Optional[float] = None
    closed_form_exact: Optional[bool] = None
    roof_converged: Optional[bool] = None
    roof_iterations: Optional[int] = None
    normalization_factor: float = 1.0
    state_digest: str
    literal: bool = False


class ReportSummary(BaseModel):
    min_gap: Optional[float] = None
    argmin_digest: Optional[str] = None
    violation_count: int = 0
    checks_failed: int = 0


class ReportDocument(BaseModel):
    """One document per CLI invocation."""
    tool_version: str = __version__
    command: str
    timestamp: str = ""
    entries: List[CheckReport] = Field(default_factory=list)
    checks: List[ExpectationCheck] = Field(default_factory=list)
    evaluations: List[EvaluationEntry] = Field(default_factory=list)
    summary: ReportSummary = Field(default_factory=ReportSummary)

    @model_validator(mode="after")
    def _summary_matches_entries(self) -> "ReportDocument":
        if self.entries:
            minimum = min(entry.gap for entry in self.entries)
            if self.summary.min_gap is None or abs(self.summary.min_gap - minimum) > SUMMARY_TOLERANCE:
                raise ValueError(f"summary.min_gap {self.summary.min_gap!r} != minimum entry gap {minimum!r}")
        return self

    @classmethod
    def build(
        cls,
        command: str,
        entries: Optional[List[CheckReport]] = None,
        checks: Optional[List[ExpectationCheck]] = None,
        evaluations: Optional[List[EvaluationEntry]] = None,
        timestamp: bool = True,
    ) -> "ReportDocument":
        """Assemble a document and derive its summary; first minimum wins ties."""
        entries = list(entries or [])
        checks = list(checks or [])
        summary = ReportSummary(
            violation_count=sum(1 for entry in entries if not entry.satisfied),
            checks_failed=sum(1 for check in checks if not check.passed),
        )
        if entries:
            argmin = min(range(len(entries)), key=lambda index: (entries[index].gap, index))
            summary.min_gap = entries[argmin].gap
            summary.argmin_digest = entries[argmin].state_digest
        return cls(
            command=command,
            timestamp=datetime.now().isoformat(timespec="seconds") if timestamp else "",
            entries=entries,
            checks=checks,
            evaluations=list(evaluations or []),
            summary=summary,
        )

    @property
    def passed(self) -> bool:
        return self.summary.checks_failed == 0
