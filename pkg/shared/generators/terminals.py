"""
Terminal conditions xi = h(B_T) and their truncation families
"""

import numpy as np
from scipy import integrate

from .spec import TerminalCondition, norm
from ..errors import InvalidArgumentError

LEVI_MODE = "levi"
CLAMP_MODE = "clamp"
INDICATOR_MODE = "indicator"
TRUNCATION_MODES = (LEVI_MODE, CLAMP_MODE, INDICATOR_MODE)


def _zero(b_T):
    return np.zeros(np.shape(b_T)[:-1])


def _first(b_T):
    return b_T[..., 0]


def _abs(b_T):
    return norm(b_T)


def _neg_abs(b_T):
    return -norm(b_T)


def _square(b_T):
    return norm(b_T) ** 2


def _exp_square_quarter(b_T):
    return np.exp(norm(b_T) ** 2 / 4.0)


BUILTIN_TERMINALS = {
    "zero": dict(func=_zero, integrability_note="bounded", lower_bound=0.0),
    "BT": dict(func=_first, integrability_note="Gaussian, all moments"),
    "absBT": dict(func=_abs, integrability_note="Gaussian tails", lower_bound=0.0),
    "negAbsBT": dict(func=_neg_abs, integrability_note="Gaussian tails"),
    "BT2": dict(func=_square, integrability_note="chi-square, all moments", lower_bound=0.0),
    "expBT2over4": dict(
        func=_exp_square_quarter,
        integrability_note="in L^1 for T < 2 and in L^2 only for T < 1; heavy-tailed",
        heavy_tailed=True,
        lower_bound=1.0,
    ),
}


def terminal_condition(label):
    """Build a built-in terminal condition by label"""
    if label not in BUILTIN_TERMINALS:
        raise InvalidArgumentError(f"Unknown terminal: {label}. Available: {list(BUILTIN_TERMINALS.keys())}")
    return TerminalCondition(label=label, **BUILTIN_TERMINALS[label])


def shifted_terminal(xi, other):
    """xi + other as a terminal condition (other is a TerminalCondition)"""
    def func(b_T):
        return xi.eval(b_T) + other.eval(b_T)

    lower = None
    if xi.lower_bound is not None and other.lower_bound is not None:
        lower = xi.lower_bound + other.lower_bound
    return TerminalCondition(
        func=func,
        label=f"{xi.label}+{other.label}",
        integrability_note="sum of integrable terminals",
        heavy_tailed=xi.heavy_tailed or other.heavy_tailed,
        lower_bound=lower,
    )


def truncated_terminal(xi, level, mode=LEVI_MODE):
    """
    Truncation of xi at level L

    Modes:
        levi: xi ^ L (nondecreasing in L, converges up to xi)
        clamp: xi clipped to [-L, L] (dominated by |xi|)
        indicator: xi 1_{|B_T| <= L} (dominated by |xi|)

    level = inf returns xi itself.
    """
    if mode not in TRUNCATION_MODES:
        raise InvalidArgumentError(f"Unknown truncation mode: {mode}. Available: {list(TRUNCATION_MODES)}")
    if level is None or np.isinf(level):
        return xi
    if not level > 0:
        raise InvalidArgumentError(f"truncation level must be positive, got {level}")
    level = float(level)

    if mode == LEVI_MODE:
        def func(b_T):
            return np.minimum(xi.eval(b_T), level)
        lower = xi.lower_bound
    elif mode == CLAMP_MODE:
        def func(b_T):
            return np.clip(xi.eval(b_T), -level, level)
        lower = -level if xi.lower_bound is None else max(-level, min(xi.lower_bound, level))
    else:
        def func(b_T):
            return np.where(norm(b_T) <= level, xi.eval(b_T), 0.0)
        lower = None if xi.lower_bound is None else min(xi.lower_bound, 0.0)

    return TerminalCondition(
        func=func,
        label=f"{xi.label}|{mode}({level:g})",
        integrability_note=f"{mode} truncation of {xi.label}",
        heavy_tailed=False,
        lower_bound=lower,
    )


def expected_terminal(xi, T, breaks=(), width=12.0):
    """
    E[xi(B_T)] for d = 1 by adaptive quadrature against the N(0, T) density

    Args:
        xi: TerminalCondition (not heavy-tailed)
        T: Horizon
        breaks: Points where xi may jump or kink (passed to quad)
        width: Integration range in standard deviations

    Returns:
        (value, absolute error estimate)
    """
    if xi.heavy_tailed:
        raise InvalidArgumentError(f"{xi.label} is heavy-tailed; quadrature of its expectation is refused")
    if not T > 0:
        raise InvalidArgumentError(f"T must be positive, got {T}")
    scale = np.sqrt(T)
    limit = width * scale
    inner = sorted({float(p) for p in (0.0, *breaks) if -limit < p < limit})

    def integrand(x):
        return float(xi.eval(np.array([[x]]))[0]) * np.exp(-0.5 * x * x / T) / (scale * np.sqrt(2.0 * np.pi))

    value, error = integrate.quad(integrand, -limit, limit, points=inner, limit=200)
    return float(value), float(error)


def truncation_breaks(level, mode):
    """Points of B_T where a truncation may introduce kinks or jumps"""
    if level is None or np.isinf(level):
        return ()
    level = float(level)
    if mode == INDICATOR_MODE:
        return (-level, level)
    # xi crosses the level at |b| = L for |b| terminals and at sqrt(L) for |b|^2
    root = np.sqrt(level)
    return (-level, -root, root, level)
