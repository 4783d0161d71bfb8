"""Utility functions for the coherence toolkit."""

import hashlib
import logging
import time
from functools import wraps
from typing import Callable

import numpy as np

# Configure logging
logger = logging.getLogger(__name__)

SEED_MASK = (1 << 64) - 1


def track_performance(func: Callable) -> Callable:
    """Decorator to track function performance."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        try:
            result = func(*args, **kwargs)
            duration = time.perf_counter() - start_time
            logger.info(
                f"{func.__name__} completed in {duration:.3f}s",
                extra={"duration": duration, "function": func.__name__},
            )
            return result
        except Exception as e:
            duration = time.perf_counter() - start_time
            logger.error(
                f"{func.__name__} failed after {duration:.3f}s: {e}",
                exc_info=True,
            )
            raise
    return wrapper


def normalize_seed(seed: int) -> int:
    """Map any integer (negative included) onto the non-negative seeds numpy accepts."""
    return int(seed) & SEED_MASK


def spawn_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent child seed sequences; child k does not depend on count."""
    return np.random.SeedSequence(normalize_seed(seed)).spawn(count)


def seed_to_int(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def array_digest(array: np.ndarray) -> str:
    """Short stable digest of an array's values (used to tag reported states)."""
    data = np.ascontiguousarray(np.asarray(array, dtype=np.complex128))
    return hashlib.sha256(data.tobytes()).hexdigest()[:16]
