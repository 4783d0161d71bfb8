import numpy as np
import pytest

from src.harness.fixtures import fixture_state
from src.roof import RoofConfig


@pytest.fixture
def fast_roof() -> RoofConfig:
    return RoofConfig(restarts=4, max_iters=300, seed=0)


@pytest.fixture
def uniform_state():
    """1/2 (|11> + |12> + |21> + |22>)."""
    return fixture_state("uniform_2x2")


@pytest.fixture
def half_entropy_state():
    return fixture_state("half_entropy_counterexample")


@pytest.fixture
def qubit_t06():
    """Qubit with off-diagonal magnitude 0.3, so C_l1 = 0.6."""
    from src.state import DensityMatrix

    return DensityMatrix(matrix=np.array([[0.5, 0.3], [0.3, 0.5]]))
