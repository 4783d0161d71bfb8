"""State-file reading and writing.

A state file is a JSON document::

    {"kind": "pure" | "bipartite_pure" | "density",
     "dims": [d] or [d_A, d_B],
     "amplitudes": [[re, im], ...]    # pure and bipartite_pure, row-major
     "entries": [[re, im], ...]}      # density, row-major d x d

Amplitudes are normalized on load; densities are rescaled to unit trace.
The applied factor is recorded on the loaded state.
"""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from ..config import MAX_SUBSYSTEM_DIM
from ..state import MIN_NORM, BipartitePureState, DensityMatrix, PureState

logger = logging.getLogger(__name__)

AnyState = Union[PureState, BipartitePureState, DensityMatrix]


class StateFileError(ValueError):
    """Unparseable or inconsistent state file; ``field`` names the offending key."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field


class DimensionLimitError(ValueError):
    """A subsystem dimension exceeds the supported cap."""


class StateFile(BaseModel):
    """On-disk schema."""
    kind: Literal["pure", "bipartite_pure", "density"]
    dims: List[int]
    amplitudes: Optional[List[Tuple[float, float]]] = None
    entries: Optional[List[Tuple[float, float]]] = None


class LoadedState(BaseModel):
    model_config = {"arbitrary_types_allowed": True, "frozen": True}

    kind: str
    state: AnyState
    normalization_factor: float


def _complex(pairs: List[Tuple[float, float]]) -> np.ndarray:
    return np.array([re + 1j * im for re, im in pairs], dtype=np.complex128)


def _check_dims(doc: StateFile) -> None:
    expected = 2 if doc.kind == "bipartite_pure" else 1
    if len(doc.dims) != expected:
        raise StateFileError(f"kind {doc.kind!r} needs {expected} dimension(s), got {doc.dims}", "dims")
    for dim in doc.dims:
        if dim < 1:
            raise StateFileError(f"dimensions must be positive, got {doc.dims}", "dims")
        if dim > MAX_SUBSYSTEM_DIM:
            raise DimensionLimitError(f"dimension {dim} exceeds the limit of {MAX_SUBSYSTEM_DIM} per subsystem")


def _normalized_vector(doc: StateFile, length: int) -> Tuple[np.ndarray, float]:
    if doc.amplitudes is None:
        raise StateFileError(f"required for kind {doc.kind!r}", "amplitudes")
    vector = _complex(doc.amplitudes)
    if vector.size != length:
        raise StateFileError(f"expected {length} [re, im] pairs, got {vector.size}", "amplitudes")
    norm = float(np.linalg.norm(vector))
    if norm < MIN_NORM:
        raise StateFileError(f"vector norm {norm:.3e} is below {MIN_NORM}", "amplitudes")
    return vector / norm, 1.0 / norm


def parse_state(doc: StateFile) -> LoadedState:
    _check_dims(doc)
    try:
        if doc.kind == "pure":
            vector, factor = _normalized_vector(doc, doc.dims[0])
            state: AnyState = PureState(amplitudes=vector)
        elif doc.kind == "bipartite_pure":
            dim_a, dim_b = doc.dims
            vector, factor = _normalized_vector(doc, dim_a * dim_b)
            state = BipartitePureState(coeffs=vector.reshape(dim_a, dim_b))
        else:
            dim = doc.dims[0]
            if doc.entries is None:
                raise StateFileError("required for kind 'density'", "entries")
            matrix = _complex(doc.entries)
            if matrix.size != dim * dim:
                raise StateFileError(f"expected {dim * dim} [re, im] pairs, got {matrix.size}", "entries")
            matrix = matrix.reshape(dim, dim)
            trace = float(np.trace(matrix).real)
            if trace < MIN_NORM:
                raise StateFileError(f"trace {trace:.3e} is not positive", "entries")
            factor = 1.0 / trace
            state = DensityMatrix(matrix=matrix * factor)
    except ValidationError as exc:
        field = "entries" if doc.kind == "density" else "amplitudes"
        raise StateFileError(exc.errors()[0]["msg"], field) from exc
    return LoadedState(kind=doc.kind, state=state, normalization_factor=factor)


def load_state(path: Union[str, Path]) -> LoadedState:
    """Read and validate a state file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}", "path") from exc
    try:
        doc = StateFile.model_validate_json(text)
    except ValidationError as exc:
        error = exc.errors()[0]
        field = ".".join(str(part) for part in error["loc"]) or "document"
        raise StateFileError(error["msg"], field) from exc
    loaded = parse_state(doc)
    logger.info(f"loaded {loaded.kind} state from {path} (normalization factor {loaded.normalization_factor:.6g})")
    return loaded


def _pairs(values: np.ndarray) -> List[Tuple[float, float]]:
    return [(float(z.real), float(z.imag)) for z in np.asarray(values).reshape(-1)]


def to_state_file(state: AnyState) -> StateFile:
    if isinstance(state, BipartitePureState):
        return StateFile(kind="bipartite_pure", dims=[state.dim_a, state.dim_b], amplitudes=_pairs(state.coeffs))
    if isinstance(state, PureState):
        return StateFile(kind="pure", dims=[state.dim], amplitudes=_pairs(state.amplitudes))
    return StateFile(kind="density", dims=[state.dim], entries=_pairs(state.matrix))


def save_state(path: Union[str, Path], state: AnyState) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_state_file(state).model_dump(exclude_none=True), indent=2), encoding="utf-8")
    return path
