"""
Regression-based backward Monte Carlo solver
"""

from .config import SolverConfig, POLYNOMIAL_BASIS, LOCAL_BASIS, BASIS_KINDS
from .regression import Projection, hermite_design
from .diagnostics import Diagnostics, diagnostics_report, normalized_moment
from .backward import SolveResult, default_truncation_mode, solve, solve_truncated_family
