from functools import lru_cache

import numpy as np
import pytest

from analysis.grid import build_grid
from analysis.kernel import KernelSpec, assemble
from utils import set_verbose


@lru_cache(maxsize=None)
def _interval(n: int):
    return build_grid(1, [[0.0, 1.0]], [n])


@lru_cache(maxsize=None)
def _pure_assembly(n: int, p: float, s: float, C: float = 1.0):
    return assemble(_interval(n), KernelSpec(p=p, s=s, C=C))


@pytest.fixture(autouse=True)
def quiet():
    set_verbose(False)
    yield
    set_verbose(False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def interval():
    """Unit-interval grid with n cells (memoized)."""
    return _interval


@pytest.fixture
def pure_assembly():
    """1D pure fractional assembly on the unit interval (memoized, read-only)."""
    return _pure_assembly


@pytest.fixture
def setup_1d(interval, pure_assembly):
    """(grid, assembly) for n cells and exponents p, s."""

    def make(n: int, p: float = 2.0, s: float = 0.4):
        return interval(n), pure_assembly(n, p, s)

    return make
