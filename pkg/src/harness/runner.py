"""Rendering and writing report documents."""

import csv
import io
import logging
from pathlib import Path
from typing import Optional, Union

from .models import ReportDocument

logger = logging.getLogger(__name__)

ENTRY_COLUMNS = ["measure", "condition", "lhs", "rhs_sum", "gap", "certification", "label", "state_digest"]
EVALUATION_COLUMNS = ["measure", "kind", "dim", "value", "certification", "closed_form", "state_digest"]


def render_json(document: ReportDocument) -> str:
    return document.model_dump_json(indent=2) + "\n"


def render_csv(document: ReportDocument) -> str:
    """Flat table: one row per check entry, or per evaluation when there are no entries."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if document.entries or not document.evaluations:
        writer.writerow(ENTRY_COLUMNS)
        for entry in document.entries:
            writer.writerow([
                entry.measure.value,
                entry.condition.value,
                repr(entry.lhs),
                repr(entry.rhs_sum),
                repr(entry.gap),
                entry.certification.value,
                entry.label,
                entry.state_digest,
            ])
    else:
        writer.writerow(EVALUATION_COLUMNS)
        for evaluation in document.evaluations:
            writer.writerow([
                evaluation.measure.value,
                evaluation.kind,
                evaluation.dim,
                repr(evaluation.value),
                evaluation.certification.value,
                "" if evaluation.closed_form is None else repr(evaluation.closed_form),
                evaluation.state_digest,
            ])
    return buffer.getvalue()


def write_report(
    document: ReportDocument,
    output: Optional[Union[str, Path]] = None,
    as_csv: bool = False,
) -> str:
    """Render the document and write it to ``output`` (stdout when None)."""
    text = render_csv(document) if as_csv else render_json(document)
    if output is None:
        print(text, end="")
        return text
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"report written to {path}")
    return text
