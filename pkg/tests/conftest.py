"""Pytest configuration and shared fixtures."""

import sys
from pathlib import Path

import pytest

# Add project root to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: long-running reproduction of published values")


@pytest.fixture(autouse=True)
def clear_geometry_caches():
    """Clear the lattice caches before each test so models never leak between tests."""
    from wgslab.lattice import coupling_matrix, distance_matrix, position_array

    position_array.cache_clear()
    distance_matrix.cache_clear()
    coupling_matrix.cache_clear()

    yield

    position_array.cache_clear()
    distance_matrix.cache_clear()
    coupling_matrix.cache_clear()


@pytest.fixture
def chain_model():
    """All-to-all chain of 6 sites at alpha = 1."""
    from wgslab.lattice import CouplingModel, LatticeSpec

    return CouplingModel(LatticeSpec.chain(6), 1.0)


@pytest.fixture
def square_model():
    """3 x 3 lattice slightly off the square geometry."""
    from wgslab.lattice import CouplingModel, LatticeSpec

    return CouplingModel(LatticeSpec.deformed(3, 105.0), 1.5)


@pytest.fixture
def run_args(tmp_path):
    """Arguments every CLI test run shares: single worker, output in tmp_path."""
    return ["--workers", "1", "--outdir", str(tmp_path)]


@pytest.fixture
def rng():
    """Seeded generator for randomized checks."""
    import numpy as np

    return np.random.default_rng(1234)
