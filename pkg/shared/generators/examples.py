"""
The three reference generators with general growth in y and rough behavior in z
"""

from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .spec import (
    AssumptionParams,
    GeneratorSpec,
    constant_process,
    inverse_sqrt_distance,
    linear_modulus,
    norm,
    zero_process,
)
from ..errors import InvalidArgumentError


def example1(d=1):
    """
    g = -|b| e^y + (|y| + sqrt|z|) sin|z| + t^(-1/2) 1_{t>0} + |b|^2

    Claims (H1)-(H4) with mu = 1, lambda = 1, alpha = 1/2 and f = 0.
    Not uniformly continuous in z.
    """
    def func(t, b, y, z):
        abs_b = norm(b)
        abs_z = norm(z)
        return (
            -abs_b * np.exp(y)
            + (np.abs(y) + np.sqrt(abs_z)) * np.sin(abs_z)
            + inverse_sqrt_distance(t, 0.0)
            + abs_b ** 2
        )

    params = AssumptionParams(
        mu=1.0,
        lam=1.0,
        alpha=0.5,
        f_process=zero_process,
        flags={"H1", "H1'", "H2", "H3", "H4"},
    )
    return GeneratorSpec(func=func, params=params, label="example1", d=d, singular_times=(0.0,))


@lru_cache(maxsize=32)
def log_growth_offset(alpha):
    """
    kappa(alpha) = sup_{x >= 0} (ln(1 + x) - x^alpha)

    The supremum is searched in s = ln x; kappa(1/2) = 0.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidArgumentError(f"alpha must lie strictly inside (0, 1), got {alpha}")

    def negative_gap(s):
        return -(np.logaddexp(0.0, s) - np.exp(alpha * s))

    upper = 60.0 / alpha
    result = minimize_scalar(negative_gap, bounds=(-40.0, upper), method="bounded",
                             options={"xatol": 1e-10})
    kappa = max(0.0, -float(result.fun))
    # Relative margin for the optimizer's tolerance
    return kappa * (1.0 + 1e-6)


def example2(d=1, alpha=0.5):
    """
    g = 1_{y<=0} sin y + 1_{y>0} cos y + [|y| + ln(1+|z|)] sin(y^2 |z|^3) + b_1

    Discontinuous in y at 0 (left-continuous, lower semicontinuous) and not
    uniformly continuous in z. Claims (H1a) and (H5) with C = 1 and
    f = 1 + |b_1| + kappa(alpha).
    """
    kappa = log_growth_offset(float(alpha))

    def func(t, b, y, z):
        abs_z = norm(z)
        step = np.where(y <= 0, np.sin(y), np.cos(y))
        return step + (np.abs(y) + np.log1p(abs_z)) * np.sin(y ** 2 * abs_z ** 3) + b[..., 0]

    def f_process(t, b):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1])
        return np.broadcast_to(1.0 + kappa + np.abs(b[..., 0]), shape)

    params = AssumptionParams(
        C=1.0,
        alpha=float(alpha),
        f_process=f_process,
        flags={"H1a", "H5"},
    )
    return GeneratorSpec(func=func, params=params, label="example2", d=d,
                         depends_on=frozenset({"b", "y", "z"}))


def example3(d=1, T=1.0):
    """
    g = |b|^2 e^{-y} + sqrt(1 + |y| + |z|) + |z|^(1/3) + |t - T/2|^(-1/2) 1_{t != T/2}

    Claims (H1)-(H3), (H4') and (H4*) with mu = 1, lambda = 2, alpha = 1/2,
    f = 1 and phi(u) = u^(1/3) + sqrt(u). Neither Lipschitz nor Hoelder in z.
    """
    center = 0.5 * float(T)

    def func(t, b, y, z):
        abs_z = norm(z)
        return (
            norm(b) ** 2 * np.exp(-y)
            + np.sqrt(1.0 + np.abs(y) + abs_z)
            + np.cbrt(abs_z)
            + inverse_sqrt_distance(t, center)
        )

    def phi(u):
        u = np.asarray(u, dtype=float)
        return np.cbrt(u) + np.sqrt(u)

    phi.label = "u^(1/3)+u^(1/2)"

    params = AssumptionParams(
        mu=1.0,
        lam=2.0,
        alpha=0.5,
        f_process=constant_process(1.0),
        rho=linear_modulus(1.0),
        phi=phi,
        flags={"H1", "H1'", "H2", "H2'", "H3", "H4'", "H4*"},
    )
    return GeneratorSpec(func=func, params=params, label="example3", d=d, singular_times=(center,))
