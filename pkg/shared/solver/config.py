"""
Solver configuration
"""

from dataclasses import dataclass, replace

from ..config.numerics_config import (
    DEFAULT_BETAS,
    DEFAULT_LOCAL_BINS,
    DEFAULT_PICARD_ITERS,
    DEFAULT_PICARD_TOL,
    DEFAULT_POLY_DEGREE,
)
from ..config.presets import get_solver_preset
from ..errors import ConfigurationError, InvalidArgumentError
from ..generators.terminals import TRUNCATION_MODES
from ..stochastic import TimeGrid, make_grid

POLYNOMIAL_BASIS = "polynomial"
LOCAL_BASIS = "local"
BASIS_KINDS = (POLYNOMIAL_BASIS, LOCAL_BASIS)


@dataclass(frozen=True)
class SolverConfig:
    """
    Backward solver settings

    Attributes:
        grid: Time grid (must match the path bundle)
        paths: Number of Monte Carlo paths M
        basis: "polynomial" (Hermite polynomials of total degree <= degree)
            or "local" (indicators of equiprobable bins)
        degree: Polynomial degree p
        bins: Number of bins K for the local basis
        picard_iters: Fixed-point iterations per step
        picard_tol: Fixed-point tolerance (relative to 1 + |Y|)
        terminal_truncation: Truncation level L of xi, None for none
        truncation_mode: "levi", "clamp" or "indicator"; None picks levi for
            terminals bounded below and clamp otherwise
        monotone_fallback: Bisect paths Picard leaves unconverged when g is
            monotone in y with dt * mu < 1
        betas: Exponents of the S^beta and M^beta diagnostics
    """

    grid: TimeGrid
    paths: int
    basis: str = POLYNOMIAL_BASIS
    degree: int = DEFAULT_POLY_DEGREE
    bins: int = DEFAULT_LOCAL_BINS
    picard_iters: int = DEFAULT_PICARD_ITERS
    picard_tol: float = DEFAULT_PICARD_TOL
    terminal_truncation: float = None
    truncation_mode: str = None
    monotone_fallback: bool = True
    betas: tuple = DEFAULT_BETAS

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(beta) for beta in self.betas))
        if self.paths < 1:
            raise InvalidArgumentError(f"paths must be at least 1, got {self.paths}")
        if self.basis not in BASIS_KINDS:
            raise InvalidArgumentError(f"Unknown basis: {self.basis}. Available: {list(BASIS_KINDS)}")
        if self.basis == POLYNOMIAL_BASIS and self.degree < 1:
            raise InvalidArgumentError(f"polynomial degree must be at least 1, got {self.degree}")
        if self.basis == LOCAL_BASIS and self.bins < 2:
            raise InvalidArgumentError(f"local basis needs at least 2 bins, got {self.bins}")
        if self.picard_iters < 1 or not self.picard_tol > 0:
            raise InvalidArgumentError("picard_iters must be >= 1 and picard_tol > 0")
        if self.terminal_truncation is not None and not self.terminal_truncation > 0:
            raise InvalidArgumentError(f"terminal_truncation must be positive, got {self.terminal_truncation}")
        if self.truncation_mode is not None and self.truncation_mode not in TRUNCATION_MODES:
            raise InvalidArgumentError(f"Unknown truncation mode: {self.truncation_mode}. Available: {list(TRUNCATION_MODES)}")
        if any(not 0.0 < beta < 1.0 for beta in self.betas):
            raise InvalidArgumentError(f"betas must lie strictly inside (0, 1), got {self.betas}")

    def validate(self, g):
        """
        Check the contraction condition of the implicit step

        Raises:
            ConfigurationError: g claims H2 with mu and max dt * mu >= 1
        """
        if g.has("H2") and g.params.mu is not None:
            product = self.grid.dt * g.params.mu
            if product >= 1.0:
                raise ConfigurationError(
                    f"dt * mu = {product:g} >= 1 for {g.label}; increase N above {self.grid.horizon * g.params.mu:g}"
                )

    def with_truncation(self, level, mode=None):
        return replace(self, terminal_truncation=level, truncation_mode=mode or self.truncation_mode)

    def with_driver_tol(self, driver_tol):
        """
        Config for a generator known only up to driver_tol

        The fixed point of one step then carries an error of dt * driver_tol,
        so Picard stops there instead of at picard_tol.
        """
        if not driver_tol > 0:
            raise InvalidArgumentError(f"driver_tol must be positive, got {driver_tol}")
        return replace(self, picard_tol=max(self.picard_tol, self.grid.dt * driver_tol))

    def describe(self):
        return {
            "T": self.grid.horizon,
            "N": self.grid.n_steps,
            "M": self.paths,
            "basis": self.basis,
            "degree": self.degree,
            "bins": self.bins,
            "picard_iters": self.picard_iters,
            "picard_tol": self.picard_tol,
            "terminal_truncation": self.terminal_truncation,
            "truncation_mode": self.truncation_mode,
            "monotone_fallback": self.monotone_fallback,
            "betas": list(self.betas),
        }

    @classmethod
    def from_preset(cls, preset_name, T=1.0, **overrides):
        """Build a config from a named solver preset (smoke, desk, accurate)"""
        try:
            preset = get_solver_preset(preset_name)
        except ValueError as e:
            raise InvalidArgumentError(str(e))
        N = overrides.pop("N", preset["N"])
        M = overrides.pop("M", preset["M"])
        degree = overrides.pop("degree", preset["degree"])
        return cls(grid=make_grid(T, N), paths=M, degree=degree, **overrides)
