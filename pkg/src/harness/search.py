"""Seeded random search for violations of a superadditivity condition."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from ..config import get_thread_count
from ..core import haar_random_bipartite
from ..roof import RoofConfig
from ..state import BipartitePureState
from ..superadditivity import CheckReport, run_condition
from ..utils import seed_to_int, spawn_seeds, track_performance
from .models import ReportDocument, SearchSpec

logger = logging.getLogger(__name__)


def trial_state(dim_a: int, dim_b: int, seed_seq: np.random.SeedSequence) -> BipartitePureState:
    return haar_random_bipartite(dim_a, dim_b, seed_to_int(seed_seq))


@track_performance
def run_search(
    spec: SearchSpec,
    config: Optional[RoofConfig] = None,
    literal: bool = False,
    slack: Optional[float] = None,
    timestamp: bool = True,
) -> tuple[ReportDocument, BipartitePureState]:
    """Run every trial; keep the violations plus the arg-min trial, in trial order.

    Also returns the arg-min state so callers can save it as a state file.
    """
    seeds = spawn_seeds(spec.seed, spec.trials)

    def run(index: int) -> tuple[CheckReport, BipartitePureState]:
        phi = trial_state(spec.dim_a, spec.dim_b, seeds[index])
        report = run_condition(spec.condition, spec.measure, phi, config, literal, slack, label=f"trial_{index}")
        return report, phi

    threads = min(get_thread_count(), spec.trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(spec.trials)))
    else:
        results = [run(index) for index in range(spec.trials)]

    argmin = min(range(len(results)), key=lambda index: (results[index][0].gap, index))
    kept = [report for index, (report, _) in enumerate(results) if not report.satisfied or index == argmin]
    logger.info(
        f"search {spec.measure.value}/{spec.condition.value}: "
        f"{sum(1 for report, _ in results if not report.satisfied)} violations in {spec.trials} trials"
    )
    return ReportDocument.build("search", entries=kept, timestamp=timestamp), results[argmin][1]


def cmd_search(
    spec: SearchSpec,
    config: Optional[RoofConfig] = None,
    literal: bool = False,
    slack: Optional[float] = None,
    timestamp: bool = True,
) -> ReportDocument:
    return run_search(spec, config, literal, slack, timestamp)[0]
