"""
Backward Euler regression solver for BSDE(xi, g)

Scheme on the grid t_0 < ... < t_N:

    Y_N = xi(B_T)
    Z_i = E[Y_{i+1} dB_i | B_{t_i}] / dt_i
    Y_i = E[Y_{i+1} | B_{t_i}] + dt_i g(t_i^mid, B_{t_i}, Y_i, Z_i)

Conditional expectations are least-squares projections (see regression.py),
the implicit equation in Y_i is solved path by path, and g is evaluated at
the midpoint of each subinterval so integrable singularities at grid nodes
are never hit.
"""

from dataclasses import dataclass, field

import numpy as np

from .config import SolverConfig
from .diagnostics import diagnostics_report
from .regression import Projection
from ..config.numerics_config import BISECTION_ITERS, EPS_REG_MULTIPLIER
from ..errors import ConfigurationError, EvaluationError, InvalidArgumentError, StepFailureError
from ..generators.terminals import CLAMP_MODE, LEVI_MODE, truncated_terminal
from ..utils.logging import get_logger
from ..utils.parallel import ordered_map

logger = get_logger(__name__)

_BRACKET_DOUBLINGS = 80


@dataclass
class SolveResult:
    """
    Output of a backward solve

    Attributes:
        Y: Array [M, N+1]
        Z: Array [M, N, d]
        y0: Y at t = 0 (identical across paths)
        y0_stderr: Standard error of y0 from xi + sum dt g along each path
        epsilon_reg: Slack for discrete ordering claims
        grid: Time grid
        config: SolverConfig used
        generator: Generator label
        terminal: Label of the (possibly truncated) terminal condition
        seed: Seed of the path bundle
        step_stats: Per-step residual, bound, picard and fallback counts
        diagnostics: Diagnostics (filled by solve)
    """

    Y: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)
    y0: float
    y0_stderr: float
    epsilon_reg: float
    grid: object
    config: SolverConfig
    generator: str
    terminal: str
    seed: int
    step_stats: dict = field(repr=False, default_factory=dict)
    diagnostics: object = None

    def summary(self):
        """JSON-friendly summary without the path arrays"""
        return {
            "generator": self.generator,
            "terminal": self.terminal,
            "seed": self.seed,
            "y0": self.y0,
            "stderr": self.y0_stderr,
            "epsilon_reg": self.epsilon_reg,
            "config": self.config.describe(),
            "diagnostics": self.diagnostics.to_dict() if self.diagnostics is not None else None,
        }

    def mean_path_table(self, quantiles=(0.05, 0.5, 0.95)):
        """
        Rows (t, mean Y, quantiles of Y) per grid node

        Returns:
            List of dicts with keys t, mean_y and q<percent>
        """
        levels = np.quantile(self.Y, quantiles, axis=0)
        rows = []
        for i, t in enumerate(self.grid.nodes):
            row = {"t": float(t), "mean_y": float(self.Y[:, i].mean())}
            for q, column in zip(quantiles, levels):
                row[f"q{round(100 * q):02d}"] = float(column[i])
            rows.append(row)
        return rows


def default_truncation_mode(xi):
    """levi for terminals bounded below, clamp otherwise"""
    return LEVI_MODE if xi.lower_bound is not None else CLAMP_MODE


def _effective_terminal(xi, cfg):
    if cfg.terminal_truncation is None:
        if xi.heavy_tailed:
            logger.warning(f"Regressing directly on heavy-tailed terminal {xi.label}; prefer a truncation family")
        return xi
    mode = cfg.truncation_mode or default_truncation_mode(xi)
    return truncated_terminal(xi, cfg.terminal_truncation, mode)


def _evaluate(g, t, b, y, z, step):
    values = g.eval(t, b, y, z)
    bad = ~np.isfinite(values)
    if np.any(bad):
        m = int(np.flatnonzero(bad)[0])
        point = {"t": float(t), "b": b[m].tolist(), "y": float(np.broadcast_to(y, values.shape)[m]), "z": z[m].tolist()}
        raise EvaluationError(f"{g.label} is not finite at step {step}: {point}", point=point)
    return values


def _monotone_fallback_allowed(g, cfg, dt):
    mu = g.params.mu
    return cfg.monotone_fallback and g.has("H2") and mu is not None and dt * mu < 1.0


def _bisect(g, t, b, z, conditional, dt, tol, step):
    """
    Root of F(y) = y - dt g(t, b, y, z) - conditional, F strictly increasing

    Every path is bracketed by doubling a symmetric window, then bisected.
    """
    def F(y):
        return y - dt * _evaluate(g, t, b, y, z, step) - conditional

    width = 1.0 + np.abs(conditional) + dt * np.abs(_evaluate(g, t, b, conditional, z, step))
    lower = conditional - width
    upper = conditional + width
    for _ in range(_BRACKET_DOUBLINGS):
        low_bad = F(lower) > 0
        high_bad = F(upper) < 0
        if not np.any(low_bad) and not np.any(high_bad):
            break
        width = np.where(low_bad | high_bad, 2.0 * width, width)
        lower = np.where(low_bad, conditional - width, lower)
        upper = np.where(high_bad, conditional + width, upper)
    else:
        raise StepFailureError(f"bisection could not bracket the implicit step {step}", step=step)

    for _ in range(BISECTION_ITERS):
        middle = 0.5 * (lower + upper)
        positive = F(middle) > 0
        upper = np.where(positive, middle, upper)
        lower = np.where(positive, lower, middle)
        if np.all(upper - lower <= tol * (1.0 + np.abs(middle))):
            break
    return 0.5 * (lower + upper)


def _implicit_step(g, cfg, t, b, z, conditional, dt, step):
    """
    Solve y = conditional + dt g(t, b, y, z) on every path

    Paths leave the iteration once they converge, so later sweeps only
    evaluate g on the paths still moving.

    Returns:
        (y, picard iterations used, number of paths finished by bisection)
    """
    y = conditional.copy()
    active = np.arange(y.size)
    iterations = 0
    for iterations in range(1, cfg.picard_iters + 1):
        updated = conditional[active] + dt * _evaluate(g, t, b[active], y[active], z[active], step)
        converged = np.abs(updated - y[active]) <= cfg.picard_tol * (1.0 + np.abs(updated))
        y[active] = updated
        active = active[~converged]
        if active.size == 0:
            return y, iterations, 0

    stuck = active
    if not _monotone_fallback_allowed(g, cfg, dt):
        raise StepFailureError(
            f"Picard iteration did not converge at step {step} on {stuck.size} paths "
            f"after {cfg.picard_iters} iterations",
            step=step,
        )
    y[stuck] = _bisect(g, t, b[stuck], z[stuck], conditional[stuck], dt, cfg.picard_tol, step)
    return y, iterations, int(stuck.size)


def solve(xi, g, paths, cfg):
    """
    Solve BSDE(xi, g) on a path bundle

    Args:
        xi: TerminalCondition
        g: GeneratorSpec
        paths: PathBundle (its grid must be cfg.grid)
        cfg: SolverConfig

    Returns:
        SolveResult with diagnostics

    Raises:
        InvalidArgumentError: paths.d differs from g.d
        ConfigurationError: grid mismatch or dt * mu >= 1
        StepFailureError: the implicit step did not converge
        BasisError: ill-conditioned regression
    """
    if paths.d != g.d:
        raise InvalidArgumentError(f"path dimension {paths.d} differs from generator dimension {g.d}")
    if paths.grid != cfg.grid:
        raise ConfigurationError(
            f"bundle grid (T={paths.grid.horizon}, N={paths.grid.n_steps}) differs from solver grid "
            f"(T={cfg.grid.horizon}, N={cfg.grid.n_steps})"
        )
    if paths.M != cfg.paths:
        raise ConfigurationError(f"bundle has {paths.M} paths, config expects {cfg.paths}")
    cfg.validate(g)

    terminal = _effective_terminal(xi, cfg)
    grid = cfg.grid
    N, M, d = grid.n_steps, paths.M, paths.d
    B = paths.brownian_matrix()
    dB = paths.increments

    Y = np.empty((M, N + 1))
    Z = np.empty((M, N, d))
    Y[:, N] = terminal.eval(B[:, N, :])
    if not np.all(np.isfinite(Y[:, N])):
        raise EvaluationError(f"terminal {terminal.label} is not finite on every path")

    drift = np.zeros(M)
    residuals = np.zeros(N)
    bounds = np.zeros(N)
    picard = np.zeros(N, dtype=int)
    fallback = np.zeros(N, dtype=int)

    for i in range(N - 1, -1, -1):
        t_i = grid.nodes[i]
        dt = grid.steps[i]
        t_mid = grid.midpoints[i]
        b = B[:, i, :]

        projection = Projection(cfg, b, t_i, i)
        targets = np.column_stack([Y[:, i + 1], Y[:, i + 1, None] * dB[:, i, :]])
        fitted, residual = projection.fit(targets)
        conditional = fitted[:, 0]
        Z[:, i, :] = fitted[:, 1:] / dt

        Y[:, i], picard[i], fallback[i] = _implicit_step(g, cfg, t_mid, b, Z[:, i, :], conditional, dt, i)
        # Y_i - E[Y_{i+1} | B_{t_i}] = dt g at the fixed point
        drift += Y[:, i] - conditional

        residuals[i] = residual[0]
        bounds[i] = projection.bound(residual[:1])
        if fallback[i]:
            logger.debug(f"step {i}: {fallback[i]} paths finished by bisection")

    realized = Y[:, N] + drift
    result = SolveResult(
        Y=Y,
        Z=Z,
        y0=float(Y[0, 0]),
        y0_stderr=float(realized.std(ddof=1) / np.sqrt(M)) if M > 1 else 0.0,
        epsilon_reg=float(EPS_REG_MULTIPLIER * np.sqrt(np.sum(bounds ** 2))),
        grid=grid,
        config=cfg,
        generator=g.label,
        terminal=terminal.label,
        seed=paths.seed,
        step_stats={"residual": residuals, "bound": bounds, "picard": picard, "fallback": fallback},
    )
    result.diagnostics = diagnostics_report(result)
    logger.info(f"solve g={g.label} xi={terminal.label} N={N} M={M}: y0={result.y0:.6g} +/- {result.y0_stderr:.2g}")
    return result


def solve_truncated_family(xi, g, paths, cfg, levels, mode=None, workers=None):
    """
    One solve per truncation level on the same paths and basis

    Args:
        levels: Strictly increasing truncation levels (inf allowed last)
        mode: Truncation mode, default levi when xi is bounded below, clamp otherwise

    Returns:
        List of SolveResult in the order of levels
    """
    levels = [float(level) for level in levels]
    if not levels:
        raise InvalidArgumentError("levels must not be empty")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise InvalidArgumentError(f"levels must be strictly increasing, got {levels}")
    mode = mode or cfg.truncation_mode or default_truncation_mode(xi)

    def run(level):
        return solve(xi, g, paths, cfg.with_truncation(level, mode))

    return ordered_map(run, levels, workers)
