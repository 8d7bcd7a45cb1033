"""
Experiment specifications and tolerance policies
"""

from dataclasses import dataclass, field, fields, replace

import numpy as np

from shared.config.numerics_config import (
    DEFAULT_LOCAL_BINS,
    DEFAULT_PICARD_ITERS,
    DEFAULT_PICARD_TOL,
    DEFAULT_POLY_DEGREE,
    DETERMINISTIC_SLACK,
    SOLVER_ENVELOPE_TOL,
    STAT_MULTIPLIER,
    TAIL_RATIO_MAX,
)
from shared.config.presets import get_solver_preset, get_tolerance_preset
from shared.errors import ConfigurationError, UsageError
from shared.solver import SolverConfig
from shared.stochastic import make_grid

THEOREM_IDS = (
    "T1_minimal",
    "T1_maximal",
    "T2_compare",
    "T3_levi",
    "T4_lebesgue",
    "T5_discontinuous",
    "T6_compare_disc",
    "T7_levi_disc",
    "T8_lebesgue_disc",
    "T9_compare_general",
    "T10_uniqueness",
)


@dataclass(frozen=True)
class TolerancePolicy:
    """
    Statistical and deterministic allowances of experiment assertions

    Attributes:
        stat_multiplier: Multiple of the standard error allowed against
            independent or analytic references
        deterministic_slack: Optimizer and floating-point slack
        tail_ratio_max: Largest accepted last-gap / first-gap ratio
        last_gap_max: Optional bound on the last gap of a convergence table
    """

    stat_multiplier: float = STAT_MULTIPLIER
    deterministic_slack: float = DETERMINISTIC_SLACK
    tail_ratio_max: float = TAIL_RATIO_MAX
    last_gap_max: float = None

    def __post_init__(self):
        if not self.stat_multiplier > 0 or self.deterministic_slack < 0:
            raise ConfigurationError("tolerance policy needs stat_multiplier > 0 and deterministic_slack >= 0")
        if not 0 < self.tail_ratio_max <= 1:
            raise ConfigurationError(f"tail_ratio_max must lie in (0, 1], got {self.tail_ratio_max}")

    def ordering_allowance(self, *results):
        """Slack for ordering claims between solves on common paths"""
        return self.deterministic_slack + max(result.epsilon_reg for result in results)

    def statistical_band(self, *results):
        """k * combined standard error of independent estimates"""
        return self.stat_multiplier * float(np.sqrt(sum(result.y0_stderr ** 2 for result in results)))

    def combined(self, *results):
        """Ordering allowance plus the statistical band"""
        return self.ordering_allowance(*results) + self.statistical_band(*results)

    @classmethod
    def from_preset(cls, name):
        try:
            preset = get_tolerance_preset(name)
        except ValueError as e:
            raise UsageError(str(e), key="tolerance")
        preset.pop("description", None)
        return cls(**preset)

    def describe(self):
        return {
            "stat_multiplier": self.stat_multiplier,
            "deterministic_slack": self.deterministic_slack,
            "tail_ratio_max": self.tail_ratio_max,
            "last_gap_max": self.last_gap_max,
        }


@dataclass(frozen=True)
class ExperimentSpec:
    """
    One theorem experiment

    Attributes:
        theorem: Theorem id (see THEOREM_IDS)
        generator: Generator label (registry label or expr:...)
        terminal: Terminal label
        generator_options: Factory options of the generator
        generator_prime: Comparison generator label (defaults to generator)
        generator_prime_shift: Constant added to the comparison generator
        terminal_prime: Comparison terminal label (defaults to terminal)
        terminal_prime_add: Terminal label added to the comparison terminal
        n_list: Envelope indices, strictly increasing
        levels: Truncation levels, strictly increasing
        truncation_mode: levi / clamp / indicator (None picks by theorem)
        reference_value: Optional analytic value of the limit y0
        bracket: T5 only, also run SUP_YZ and the direct solve
        control: T10 power-control generator label (None to skip)
        seed: Seed of the shared path bundle
        T, N, M, d: Horizon, steps, paths, dimension
        basis, degree, bins: Regression basis
        picard_iters, picard_tol: Implicit-step settings
        envelope_tol: Optimizer tolerance of approximating generators; the
            Picard tolerance of their solves is relaxed to dt * envelope_tol
        tolerance: TolerancePolicy
    """

    theorem: str
    generator: str
    terminal: str
    seed: int
    generator_options: dict = field(default_factory=dict)
    generator_prime: str = None
    generator_prime_shift: float = 0.0
    terminal_prime: str = None
    terminal_prime_add: str = None
    n_list: tuple = (1, 2, 4, 8, 16)
    levels: tuple = (1.0, 2.0, 4.0, 8.0, 16.0)
    truncation_mode: str = None
    reference_value: float = None
    bracket: bool = False
    control: str = "oscillating_z"
    T: float = 1.0
    N: int = 50
    M: int = 50_000
    d: int = 1
    basis: str = "polynomial"
    degree: int = DEFAULT_POLY_DEGREE
    bins: int = DEFAULT_LOCAL_BINS
    picard_iters: int = DEFAULT_PICARD_ITERS
    picard_tol: float = DEFAULT_PICARD_TOL
    envelope_tol: float = SOLVER_ENVELOPE_TOL
    tolerance: TolerancePolicy = field(default_factory=TolerancePolicy)

    def __post_init__(self):
        if self.theorem not in THEOREM_IDS:
            raise ConfigurationError(f"Unknown theorem id: {self.theorem}. Available: {list(THEOREM_IDS)}")
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        object.__setattr__(self, "levels", tuple(float(level) for level in self.levels))
        for name in ("n_list", "levels"):
            values = getattr(self, name)
            if not values or any(b <= a for a, b in zip(values, values[1:])):
                raise ConfigurationError(f"{name} must be non-empty and strictly increasing, got {list(values)}")
        if self.n_list[0] < 1:
            raise ConfigurationError(f"envelope indices must be positive, got {list(self.n_list)}")

    def solver_config(self):
        return SolverConfig(
            grid=make_grid(self.T, self.N),
            paths=self.M,
            basis=self.basis,
            degree=self.degree,
            bins=self.bins,
            picard_iters=self.picard_iters,
            picard_tol=self.picard_tol,
        )

    def with_changes(self, **changes):
        return replace(self, **changes)

    def describe(self):
        echo = {}
        for spec_field in fields(self):
            value = getattr(self, spec_field.name)
            if isinstance(value, TolerancePolicy):
                value = value.describe()
            elif isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, dict):
                value = dict(value)
            echo[spec_field.name] = value
        return echo

    @classmethod
    def from_mapping(cls, mapping):
        """
        Build a spec from a parsed configuration mapping

        Accepts every field name plus "preset" (solver preset supplying N, M
        and degree) and "tolerance" given as a preset name or a mapping.

        Raises:
            UsageError: unknown key, missing required field or bad value
        """
        if not isinstance(mapping, dict):
            raise UsageError("experiment configuration must be a mapping", key="experiment")
        values = dict(mapping)
        names = {spec_field.name for spec_field in fields(cls)}
        unknown = sorted(set(values) - names - {"preset"})
        if unknown:
            raise UsageError(f"unknown experiment key '{unknown[0]}'", key=unknown[0])
        for required in ("theorem", "generator", "terminal", "seed"):
            if values.get(required) is None:
                raise UsageError(f"missing required experiment field '{required}'", key=required)

        if isinstance(values.get("control"), str) and values["control"].lower() in ("none", ""):
            values["control"] = None

        preset_name = values.pop("preset", None)
        if preset_name is not None:
            try:
                preset = get_solver_preset(preset_name)
            except ValueError as e:
                raise UsageError(str(e), key="preset")
            for key in ("N", "M", "degree"):
                values.setdefault(key, preset[key])

        tolerance = values.get("tolerance")
        if isinstance(tolerance, str):
            values["tolerance"] = TolerancePolicy.from_preset(tolerance)
        elif isinstance(tolerance, dict):
            try:
                values["tolerance"] = TolerancePolicy(**tolerance)
            except TypeError as e:
                raise UsageError(f"bad tolerance mapping: {e}", key="tolerance")
        elif tolerance is not None and not isinstance(tolerance, TolerancePolicy):
            raise UsageError("tolerance must be a preset name or a mapping", key="tolerance")

        for key in ("seed", "N", "M", "d", "degree", "bins", "picard_iters"):
            if key in values and (isinstance(values[key], bool) or not isinstance(values[key], int)):
                raise UsageError(f"'{key}' must be an integer, got {values[key]!r}", key=key)
        try:
            return cls(**values)
        except (TypeError, ValueError) as e:
            raise UsageError(f"invalid experiment configuration: {e}", key="experiment")
