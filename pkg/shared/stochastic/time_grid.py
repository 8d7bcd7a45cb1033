"""
Uniform time grids on [0, T]
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidArgumentError


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """
    Uniform grid t_0 = 0 < t_1 < ... < t_N = T

    Attributes:
        horizon: Terminal time T
        n_steps: Number of steps N
        nodes: Array of N + 1 grid times
    """

    horizon: float
    n_steps: int
    nodes: np.ndarray = field(repr=False)

    @property
    def dt(self):
        """Uniform step size T / N"""
        return self.horizon / self.n_steps

    @property
    def steps(self):
        """Array of step sizes t_{i+1} - t_i"""
        return np.diff(self.nodes)

    @property
    def midpoints(self):
        """Midpoints of every subinterval, used to evaluate generators away from nodes"""
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def refined(self):
        """Grid with twice as many steps over the same horizon"""
        return make_grid(self.horizon, 2 * self.n_steps)

    def __eq__(self, other):
        if not isinstance(other, TimeGrid):
            return NotImplemented
        return self.horizon == other.horizon and self.n_steps == other.n_steps

    def __hash__(self):
        return hash((self.horizon, self.n_steps))


def make_grid(T, N):
    """
    Build a uniform time grid

    Args:
        T: Horizon, strictly positive
        N: Number of steps, at least 1

    Returns:
        TimeGrid with nodes i * T / N and the last node pinned to T
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise InvalidArgumentError(f"N must be an integer, got {N!r}")
    if not np.isfinite(T) or T <= 0:
        raise InvalidArgumentError(f"T must be positive, got {T}")
    if N < 1:
        raise InvalidArgumentError(f"N must be at least 1, got {N}")

    T = float(T)
    N = int(N)
    nodes = np.arange(N + 1, dtype=np.float64) * (T / N)
    nodes[-1] = T
    nodes.setflags(write=False)
    return TimeGrid(horizon=T, n_steps=N, nodes=nodes)
