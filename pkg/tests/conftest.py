"""
Shared fixtures for the laboratory test suite
"""

import sys
from pathlib import Path

import pytest

# Add the repository root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from shared.assumptions import make_lattice
from shared.solver import SolverConfig
from shared.stochastic import make_grid, simulate_paths


@pytest.fixture
def grid():
    """Four-step grid on [0, 1]"""
    return make_grid(1.0, 4)


@pytest.fixture
def small_bundle(grid):
    """200 one-dimensional paths on the four-step grid"""
    return simulate_paths(grid, 1, 200, seed=11, workers=1)


@pytest.fixture
def small_lattice():
    """Reduced assumption lattice for fast checks"""
    return make_lattice(d=1, T=1.0, seed=3, t_count=4, b_count=3, pair_count=500)


@pytest.fixture
def solver_setup():
    """Factory for (config, bundle) pairs sharing one grid"""
    def build(T=1.0, N=10, M=2000, seed=5, **options):
        cfg = SolverConfig(grid=make_grid(T, N), paths=M, **options)
        return cfg, simulate_paths(cfg.grid, 1, M, seed=seed, workers=1)

    return build
