"""Configuration for the coherence toolkit."""

import os
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

env_path = Path(__file__).parent.parent / ".env"
load_dotenv(dotenv_path=env_path)

DEFAULT_RESTARTS = 32
DEFAULT_MAX_ITERS = 2000
DEFAULT_STEP_TOLERANCE = 1e-10
DEFAULT_SEED = 0
DEFAULT_NUMERIC_SLACK = 1e-9
MAX_SUBSYSTEM_DIM = 16


def _read_int(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(
            f"{name}={raw!r} is not an integer.\n"
            f"Set it in the .env file or the environment, e.g. {name}={default if default is not None else 4}"
        ) from None


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(
            f"{name}={raw!r} is not a number.\n"
            f"Set it in the .env file or the environment, e.g. {name}={default}"
        ) from None


def get_thread_count() -> int:
    """Worker cap for roof restarts and search trials (COHERENCE_ROOF_THREADS)."""
    threads = _read_int("COHERENCE_ROOF_THREADS", 1)
    if threads < 1:
        raise ValueError(
            f"COHERENCE_ROOF_THREADS must be at least 1, got {threads}."
        )
    return threads


def get_numeric_slack() -> float:
    """Slack absorbed by the 'satisfied' verdict of inequality checks."""
    slack = _read_float("COHERENCE_NUMERIC_SLACK", DEFAULT_NUMERIC_SLACK)
    if slack < 0:
        raise ValueError(f"COHERENCE_NUMERIC_SLACK must be non-negative, got {slack}.")
    return slack


def get_log_level() -> str:
    return os.getenv("COHERENCE_LOG_LEVEL", "WARNING").upper()


def get_roof_config(**overrides: Any):
    """Build a RoofConfig from defaults, the environment and explicit overrides.

    Overrides whose value is None are ignored, so CLI flags that were not
    given fall through to the environment.
    """
    from .roof import RoofConfig

    values = {
        "ensemble_size": _read_int("COHERENCE_ROOF_ENSEMBLE_SIZE", None),
        "restarts": _read_int("COHERENCE_ROOF_RESTARTS", DEFAULT_RESTARTS),
        "max_iters": _read_int("COHERENCE_ROOF_MAX_ITERS", DEFAULT_MAX_ITERS),
        "step_tolerance": _read_float("COHERENCE_ROOF_TOL", DEFAULT_STEP_TOLERANCE),
        "seed": _read_int("COHERENCE_ROOF_SEED", DEFAULT_SEED),
    }
    values.update({key: value for key, value in overrides.items() if value is not None})
    return RoofConfig(**values)
