"""
Generator, assumption-parameter and terminal-condition types

Generators are Markovian: all randomness enters through the Brownian state b.
Every callable is vectorized with numpy broadcasting: t and y have shape (...),
b and z have shape (..., d), and the result has the broadcast shape (...).
"""

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ContractError, InvalidArgumentError

KNOWN_FLAGS = frozenset({
    "H1", "H1'", "H1a", "H1b", "H2", "H2'", "H3", "H4", "H4'", "H4''", "H4*", "H5",
})

ALL_VARIABLES = frozenset({"t", "b", "y", "z"})


def zero_process(t, b):
    """f_t = 0"""
    return np.zeros(np.broadcast_shapes(np.shape(t), np.shape(b)[:-1]))


def constant_process(value):
    """f_t = value for every (t, b)"""
    value = float(value)

    def process(t, b):
        return np.full(np.broadcast_shapes(np.shape(t), np.shape(b)[:-1]), value)

    process.constant = value
    return process


def linear_modulus(slope=1.0):
    """rho(u) = slope * u"""
    slope = float(slope)

    def modulus(u):
        return slope * np.asarray(u, dtype=float)

    modulus.label = f"{slope:g}*u"
    return modulus


@dataclass(frozen=True)
class AssumptionParams:
    """
    Declared constants of the assumption classes a generator claims

    Attributes:
        mu: Monotonicity constant in y (H2)
        lam: Growth constant in z (H4, H4')
        alpha: Hoelder exponent in (0, 1) (H4, H4', H4'', H5)
        C: Linear-growth constant (H5)
        gamma: Hoelder constant in z (H4'')
        f_process: Nonnegative process f(t, b)
        rho: Concave modulus in y (H2')
        phi: Modulus in z (H4*)
        flags: Claimed assumption ids
    """

    mu: float = None
    lam: float = None
    alpha: float = None
    C: float = None
    gamma: float = None
    f_process: object = field(default=zero_process, compare=False)
    rho: object = field(default=None, compare=False)
    phi: object = field(default=None, compare=False)
    flags: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "flags", frozenset(self.flags))
        unknown = self.flags - KNOWN_FLAGS
        if unknown:
            raise InvalidArgumentError(f"Unknown assumption flags: {sorted(unknown)}. Available: {sorted(KNOWN_FLAGS)}")
        if self.alpha is not None and not 0.0 < self.alpha < 1.0:
            raise InvalidArgumentError(f"alpha must lie strictly inside (0, 1), got {self.alpha}")
        if self.mu is not None and self.mu < 0:
            raise InvalidArgumentError(f"mu must be nonnegative, got {self.mu}")
        for name in ("lam", "C", "gamma"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InvalidArgumentError(f"{name} must be positive, got {value}")
        if self.f_process is None:
            object.__setattr__(self, "f_process", zero_process)

        required = {
            "H2": ("mu",),
            "H4": ("lam", "alpha"),
            "H4'": ("lam", "alpha"),
            "H4''": ("gamma", "alpha"),
            "H5": ("C", "alpha"),
            "H2'": ("rho",),
            "H4*": ("phi",),
        }
        for flag, names in required.items():
            if flag in self.flags:
                missing = [name for name in names if getattr(self, name) is None]
                if missing:
                    raise InvalidArgumentError(f"flag {flag} needs parameters {missing}")

    @classmethod
    def from_mapping(cls, mapping):
        """
        Build params from plain configuration values

        Scalar constants keep their names; "f" is a constant process and
        "rho" / "phi" are slopes of linear moduli.
        """
        values = dict(mapping)
        unknown = sorted(set(values) - {"mu", "lam", "alpha", "C", "gamma", "f", "rho", "phi", "flags"})
        if unknown:
            raise InvalidArgumentError(f"Unknown params keys: {unknown}")
        if "f" in values:
            values["f_process"] = constant_process(values.pop("f"))
        for name in ("rho", "phi"):
            if values.get(name) is not None:
                values[name] = linear_modulus(values[name])
        for name in ("mu", "lam", "alpha", "C", "gamma"):
            if values.get(name) is not None:
                values[name] = float(values[name])
        return cls(**values)

    def has(self, *flags):
        return all(flag in self.flags for flag in flags)

    def with_flags(self, *flags):
        return replace(self, flags=self.flags | frozenset(flags))

    def without_flags(self, *flags):
        return replace(self, flags=self.flags - frozenset(flags))

    def summary(self):
        """JSON-friendly view of the scalar constants and flags"""
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "alpha": self.alpha,
            "C": self.C,
            "gamma": self.gamma,
            "flags": sorted(self.flags),
        }


@dataclass(frozen=True, eq=False)
class GeneratorSpec:
    """
    A Markovian generator g(t, b, y, z)

    Attributes:
        func: Vectorized callable (t, b, y, z) -> values
        params: AssumptionParams
        label: Registry label or description
        d: Brownian dimension
        depends_on: Subset of {"t", "b", "y", "z"} the generator reads
        singular_times: Times where a declared integrable singularity sits
    """

    func: object
    params: AssumptionParams
    label: str
    d: int = 1
    depends_on: frozenset = ALL_VARIABLES
    singular_times: tuple = ()

    def __post_init__(self):
        if self.d < 1:
            raise InvalidArgumentError(f"d must be at least 1, got {self.d}")
        object.__setattr__(self, "depends_on", frozenset(self.depends_on))

    def eval(self, t, b, y, z):
        """
        Evaluate g with numpy broadcasting

        Args:
            t: Time, shape (...) or scalar
            b: Brownian state, shape (..., d)
            y: Value, shape (...) or scalar
            z: Control, shape (..., d)

        Returns:
            float64 array of the broadcast shape
        """
        t = np.asarray(t, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        if b.ndim == 0 or b.shape[-1] != self.d or z.ndim == 0 or z.shape[-1] != self.d:
            raise InvalidArgumentError(f"{self.label}: b and z need a trailing axis of size d={self.d}")
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return np.asarray(self.func(t, b, y, z), dtype=np.float64)

    __call__ = eval

    def has(self, *flags):
        return self.params.has(*flags)

    def require(self, *flags, operation="operation"):
        """Raise ContractError unless every flag is claimed"""
        missing = [flag for flag in flags if flag not in self.params.flags]
        if missing:
            raise ContractError(f"{operation} needs {self.label} to claim {missing}")

    def f(self, t, b):
        """Declared nonnegative process f(t, b)"""
        return np.asarray(self.params.f_process(np.asarray(t, dtype=float), np.asarray(b, dtype=float)), dtype=float)

    def h4_constants(self):
        """
        Growth constants (lam, alpha, f) for the (H4) inequality

        Falls back on the implications (H4'') => (H4') => (H4) when (H4)
        itself is not claimed.
        """
        p = self.params
        if "H4" in p.flags:
            return p.lam, p.alpha, p.f_process
        if "H4'" in p.flags:
            base = p.f_process

            # (f + |y| + |z|)^a <= (f + |y|)^a + |z|^a <= 1 + f + |y| + |z|^a
            def shifted_f(t, b):
                return base(t, b) + 1.0

            return p.lam, p.alpha, shifted_f
        if "H4''" in p.flags:
            return p.gamma, p.alpha, zero_process
        raise ContractError(f"{self.label} claims none of H4, H4', H4''")

    def h5_constants(self):
        """Growth constants (C, alpha, f) for (H5)"""
        p = self.params
        if "H5" not in p.flags:
            raise ContractError(f"{self.label} does not claim H5")
        return p.C, p.alpha, p.f_process

    def with_params(self, **changes):
        return replace(self, params=replace(self.params, **changes))

    def relabel(self, label):
        return replace(self, label=label)

    def describe(self):
        return {
            "label": self.label,
            "d": self.d,
            "depends_on": sorted(self.depends_on),
            "singular_times": list(self.singular_times),
            "params": self.params.summary(),
        }


@dataclass(frozen=True, eq=False)
class TerminalCondition:
    """
    Terminal condition xi = func(B_T)

    Attributes:
        func: Vectorized callable b_T (..., d) -> values (...)
        label: Registry label or description
        integrability_note: Why xi is integrable
        heavy_tailed: True when xi is integrable but regression on it is unstable
        lower_bound: Known pathwise lower bound, None when unbounded below
    """

    func: object
    label: str
    integrability_note: str = ""
    heavy_tailed: bool = False
    lower_bound: float = None

    def eval(self, b_T):
        b_T = np.asarray(b_T, dtype=np.float64)
        with np.errstate(over="ignore", invalid="ignore"):
            return np.asarray(self.func(b_T), dtype=np.float64)

    __call__ = eval

    def describe(self):
        return {
            "label": self.label,
            "integrability_note": self.integrability_note,
            "heavy_tailed": self.heavy_tailed,
            "lower_bound": self.lower_bound,
        }


def norm(v):
    """Euclidean norm over the trailing axis"""
    return np.sqrt(np.sum(np.square(v), axis=-1))


def sign(y):
    """Sign with sgn(0) = 0"""
    return np.sign(y)


def inverse_sqrt_distance(t, center):
    """1 / sqrt(|t - center|), set to 0 at t == center"""
    gap = np.abs(np.asarray(t, dtype=float) - center)
    safe = np.where(gap > 0, gap, 1.0)
    return np.where(gap > 0, 1.0 / np.sqrt(safe), 0.0)


def shifted(g, c):
    """
    g + c as a new generator

    (H2), (H4) and moduli carry over unchanged; f grows by |c| so that (H5)
    keeps holding.
    """
    c = float(c)
    base_f = g.params.f_process

    def func(t, b, y, z):
        return g.func(t, b, y, z) + c

    def f_process(t, b):
        return base_f(t, b) + abs(c)

    return replace(
        g,
        func=func,
        params=replace(g.params, f_process=f_process),
        label=f"{g.label}{c:+g}",
    )
