"""
Time grids and Brownian path simulation
"""

from .time_grid import TimeGrid, make_grid
from .brownian import (
    PathBundle,
    simulate_paths,
    simulate_path,
    brownian_at,
    brownian_matrix,
    refine,
    nested_refinement,
    coarsen,
    STANDARD_MODE,
    NESTED_MODE,
)
