"""Coherence of a single state read from a state file."""

import logging
from pathlib import Path
from typing import Optional, Union

from ..measures import MeasureId, pure_coherence, qubit_closed_form, qubit_form_is_exact
from ..roof import RoofConfig, convex_roof_upper_bound
from ..state import BipartitePureState, DensityMatrix
from ..superadditivity import Certification
from ..utils import array_digest, track_performance
from .io import LoadedState, load_state
from .models import EvaluationEntry

logger = logging.getLogger(__name__)


def evaluate_state(
    measure: MeasureId,
    loaded: LoadedState,
    config: Optional[RoofConfig] = None,
    literal: bool = False,
) -> EvaluationEntry:
    """Closed form for pure inputs, optimizer upper bound for density inputs."""
    measure = MeasureId(measure)
    state = loaded.state
    common = {
        "measure": measure,
        "kind": loaded.kind,
        "normalization_factor": loaded.normalization_factor,
        "literal": literal,
    }

    if not isinstance(state, DensityMatrix):
        psi = state.flatten() if isinstance(state, BipartitePureState) else state
        return EvaluationEntry(
            **common,
            dim=psi.dim,
            value=pure_coherence(measure, psi, literal),
            certification=Certification.EXACT,
            state_digest=array_digest(psi.amplitudes),
        )

    result = convex_roof_upper_bound(measure, state, config, literal)
    closed_form = closed_form_exact = None
    if state.dim == 2:
        closed_form = qubit_closed_form(measure, state, literal)
        closed_form_exact = qubit_form_is_exact(measure, literal) if closed_form is not None else None
    return EvaluationEntry(
        **common,
        dim=state.dim,
        value=result.value,
        certification=Certification.EXACT if state.rank() == 1 else Certification.UPPER_BOUND,
        closed_form=closed_form,
        closed_form_exact=closed_form_exact,
        roof_converged=result.converged,
        roof_iterations=result.iterations_used,
        state_digest=array_digest(state.matrix),
    )


@track_performance
def cmd_evaluate(
    measure: MeasureId,
    state_file: Union[str, Path],
    roof_config: Optional[RoofConfig] = None,
    literal: bool = False,
) -> EvaluationEntry:
    return evaluate_state(measure, load_state(state_file), roof_config, literal)
