"""
Brownian path bundles with a counter-based seeding contract

Every path m owns a Philox stream keyed on (seed, m). In standard mode the
stream is consumed in (step, component) order, so the increment addressed by
(seed, m, i, component) never depends on how paths are split across workers.
In nested mode each refinement level has its own counter offset and the path
is built by Brownian-bridge midpoint insertion, so a bundle with 2N steps
holds the N-step node positions exactly at its even nodes. Nested bundles
keep those positions, so B is read from them rather than re-summed.

Paths are simulated in blocks of PATH_BLOCK_SIZE; keys for a block are built
as one array and the bridge arithmetic runs across the whole block.
"""

from dataclasses import dataclass, field

import numpy as np

from .time_grid import TimeGrid, make_grid
from ..config.numerics_config import MAX_BUNDLE_ELEMENTS, PATH_BLOCK_SIZE
from ..errors import InvalidArgumentError, IndexOutOfRangeError, ResourceError
from ..utils.logging import get_logger
from ..utils.parallel import ordered_map

logger = get_logger(__name__)

STANDARD_MODE = "standard"
NESTED_MODE = "nested"
SIMULATION_MODES = (STANDARD_MODE, NESTED_MODE)

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class PathBundle:
    """
    M Brownian paths stored as increments

    Attributes:
        grid: Time grid shared by all paths
        d: Brownian dimension
        increments: Array [M, N, d] of Brownian increments
        seed: 64-bit seed the bundle was generated from
        mode: "standard" or "nested"
        nodes: Array [M, N + 1, d] of node positions for nested bundles,
            None when B is the prefix sum of increments
    """

    grid: TimeGrid
    d: int
    increments: np.ndarray = field(repr=False)
    seed: int
    mode: str = STANDARD_MODE
    nodes: np.ndarray = field(repr=False, default=None)

    @property
    def path_count(self):
        return self.increments.shape[0]

    @property
    def M(self):
        return self.increments.shape[0]

    @property
    def N(self):
        return self.grid.n_steps

    def brownian_at(self, m, i):
        return brownian_at(self, m, i)

    def brownian_matrix(self):
        return brownian_matrix(self)

    def terminal(self):
        """B_T on every path, shape [M, d]"""
        return brownian_matrix(self)[:, -1, :]


def _validate_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidArgumentError(f"seed must be an integer, got {seed!r}")
    if seed < 0 or seed > _SEED_MASK:
        raise InvalidArgumentError(f"seed must fit in 64 unsigned bits, got {seed}")
    return int(seed)


def _block_keys(seed, start, stop):
    """Philox keys (seed, m) for paths start..stop-1, shape [stop - start, 2]"""
    keys = np.empty((stop - start, 2), dtype=np.uint64)
    keys[:, 0] = seed
    keys[:, 1] = np.arange(start, stop, dtype=np.uint64)
    return keys


def _block_generators(keys, level=None):
    """One generator per key row; nested levels get their own counter offset"""
    if level is None:
        return [np.random.Generator(np.random.Philox(key=key)) for key in keys]
    counter = np.array([0, level, 0, 0], dtype=np.uint64)
    return [np.random.Generator(np.random.Philox(key=key, counter=counter)) for key in keys]


def _block_normals(keys, shape, level=None):
    """Standard normals [len(keys), *shape], row r drawn from the stream of keys[r]"""
    normals = np.empty((keys.shape[0], *shape))
    for row, rng in enumerate(_block_generators(keys, level)):
        # Row-major (step, component) consumption
        normals[row] = rng.standard_normal(shape)
    return normals


def _standard_block(grid, d, seed, start, stop):
    normals = _block_normals(_block_keys(seed, start, stop), (grid.n_steps, d))
    increments = normals * np.sqrt(grid.steps)[None, :, None]
    return increments, None


def _refinement_levels(N):
    levels = int(N).bit_length() - 1
    if N < 1 or (1 << levels) != N:
        raise InvalidArgumentError(f"nested mode needs N to be a power of two, got {N}")
    return levels


def _nested_block(grid, d, seed, start, stop):
    """
    Bridge construction for a block of paths

    Returns:
        (increments [P, N, d], node positions [P, N + 1, d])
    """
    T = grid.horizon
    levels = _refinement_levels(grid.n_steps)
    keys = _block_keys(seed, start, stop)

    positions = np.zeros((keys.shape[0], 2, d))
    positions[:, 1] = np.sqrt(T) * _block_normals(keys, (d,), level=0)

    for level in range(1, levels + 1):
        intervals = positions.shape[1] - 1
        width = T / intervals
        noise = _block_normals(keys, (intervals, d), level=level)
        midpoints = 0.5 * (positions[:, :-1] + positions[:, 1:]) + np.sqrt(width / 4.0) * noise

        refined = np.empty((keys.shape[0], 2 * intervals + 1, d))
        refined[:, 0::2] = positions
        refined[:, 1::2] = midpoints
        positions = refined

    return np.diff(positions, axis=1), positions


_BLOCK_BUILDERS = {STANDARD_MODE: _standard_block, NESTED_MODE: _nested_block}


def simulate_path(grid, d, seed, m, mode=STANDARD_MODE):
    """
    Reproduce the increments of a single path in isolation

    Returns:
        Array [N, d] identical to bundle.increments[m] of the full bundle
    """
    seed = _validate_seed(seed)
    if m < 0:
        raise IndexOutOfRangeError(f"path index must be nonnegative, got {m}")
    if mode not in SIMULATION_MODES:
        raise InvalidArgumentError(f"Unknown simulation mode: {mode}. Available: {list(SIMULATION_MODES)}")
    increments, _ = _BLOCK_BUILDERS[mode](grid, d, seed, int(m), int(m) + 1)
    return increments[0]


def simulate_paths(grid, d, M, seed, mode=STANDARD_MODE, workers=None, max_elements=MAX_BUNDLE_ELEMENTS):
    """
    Simulate M independent d-dimensional Brownian paths on a grid

    Args:
        grid: TimeGrid
        d: Brownian dimension (>= 1)
        M: Number of paths (>= 1)
        seed: 64-bit nonnegative seed
        mode: "standard" or "nested" (nested needs N a power of two)
        workers: Thread count for path blocks (output does not depend on it)
        max_elements: Cap on M * N * d

    Returns:
        PathBundle
    """
    if not isinstance(grid, TimeGrid):
        raise InvalidArgumentError("grid must be a TimeGrid")
    if d < 1:
        raise InvalidArgumentError(f"d must be at least 1, got {d}")
    if M < 1:
        raise InvalidArgumentError(f"M must be at least 1, got {M}")
    if mode not in SIMULATION_MODES:
        raise InvalidArgumentError(f"Unknown simulation mode: {mode}. Available: {list(SIMULATION_MODES)}")
    seed = _validate_seed(seed)
    if mode == NESTED_MODE:
        _refinement_levels(grid.n_steps)

    elements = int(M) * grid.n_steps * int(d)
    if elements > max_elements:
        raise ResourceError(
            f"bundle of {M} x {grid.n_steps} x {d} = {elements} values exceeds the cap of {max_elements}"
        )

    build = _BLOCK_BUILDERS[mode]
    blocks = [(start, min(start + PATH_BLOCK_SIZE, M)) for start in range(0, M, PATH_BLOCK_SIZE)]

    def simulate_block(bounds):
        return build(grid, d, seed, *bounds)

    logger.debug(f"Simulating {M} paths (N={grid.n_steps}, d={d}, mode={mode}) in {len(blocks)} blocks")
    parts = ordered_map(simulate_block, blocks, workers=workers)
    increments = np.concatenate([part[0] for part in parts], axis=0)
    increments.setflags(write=False)
    nodes = None
    if mode == NESTED_MODE:
        nodes = np.concatenate([part[1] for part in parts], axis=0)
        nodes.setflags(write=False)

    return PathBundle(grid=grid, d=int(d), increments=increments, seed=seed, mode=mode, nodes=nodes)


def refine(bundle, workers=None):
    """
    Bundle with 2N steps built from the same nested streams

    The refined bundle holds the original node positions bit for bit at its
    even nodes.
    """
    if bundle.mode != NESTED_MODE:
        raise InvalidArgumentError("only nested-mode bundles can be refined")
    return simulate_paths(bundle.grid.refined(), bundle.d, bundle.M, bundle.seed,
                          mode=NESTED_MODE, workers=workers)


def nested_refinement(bundle, workers=None):
    """Alias of refine kept for the documented operation name"""
    return refine(bundle, workers=workers)


def coarsen(bundle):
    """
    Bundle with N/2 steps read off the even nodes of a nested bundle

    Positions are indexed from the fine bundle, not re-summed, so
    coarsen(refine(b)) reproduces b exactly.
    """
    if bundle.mode != NESTED_MODE:
        raise InvalidArgumentError("only nested-mode bundles can be coarsened")
    if bundle.N < 2:
        raise InvalidArgumentError("a one-step bundle has no coarser level")
    nodes = np.ascontiguousarray(brownian_matrix(bundle)[:, ::2, :])
    increments = np.diff(nodes, axis=1)
    nodes.setflags(write=False)
    increments.setflags(write=False)
    return PathBundle(grid=make_grid(bundle.grid.horizon, bundle.N // 2), d=bundle.d,
                      increments=increments, seed=bundle.seed, mode=NESTED_MODE, nodes=nodes)


def brownian_at(bundle, m, i):
    """
    B_{t_i} on path m

    Nested bundles return the stored node position; otherwise a
    left-to-right prefix sum of increments.

    Args:
        bundle: PathBundle
        m: Path index in [0, M)
        i: Node index in [0, N]

    Returns:
        Array of shape (d,)
    """
    if not 0 <= m < bundle.M:
        raise IndexOutOfRangeError(f"path index {m} outside [0, {bundle.M})")
    if not 0 <= i <= bundle.N:
        raise IndexOutOfRangeError(f"node index {i} outside [0, {bundle.N}]")
    if bundle.nodes is not None:
        return bundle.nodes[m, i].copy()
    if i == 0:
        return np.zeros(bundle.d)
    return np.cumsum(bundle.increments[m, :i, :], axis=0)[-1]


def brownian_matrix(bundle):
    """
    B at every node on every path, shape [M, N + 1, d]

    Same values as brownian_at.
    """
    if bundle.nodes is not None:
        return np.array(bundle.nodes)
    positions = np.zeros((bundle.M, bundle.N + 1, bundle.d))
    np.cumsum(bundle.increments, axis=1, out=positions[:, 1:, :])
    return positions


def regenerate(bundle, workers=None):
    """Rebuild a bundle from its (seed, M, N, d, mode) description"""
    return simulate_paths(bundle.grid, bundle.d, bundle.M, bundle.seed, mode=bundle.mode, workers=workers)


__all__ = [
    "PathBundle", "simulate_paths", "simulate_path", "brownian_at", "brownian_matrix",
    "refine", "nested_refinement", "coarsen", "regenerate", "make_grid",
    "STANDARD_MODE", "NESTED_MODE", "SIMULATION_MODES",
]
