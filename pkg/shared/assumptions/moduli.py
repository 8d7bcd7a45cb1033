"""
One-dimensional checks on the moduli rho and phi
"""

import warnings

import numpy as np
from scipy import integrate

from ..config.numerics_config import CHECK_ATOL, OSGOOD_DECADES, OSGOOD_RATIO


def osgood_divergent(rho, decades=OSGOOD_DECADES, ratio=OSGOOD_RATIO):
    """
    Classify whether the integral of 1/rho diverges at 0+

    Partial integrals I_k = int_{10^-k}^1 du / rho(u) are computed by
    quadrature in s = ln u. Power-type convergent moduli add geometrically
    shrinking amounts per decade, divergent ones (u, u ln(1/u)) do not, so
    the integral is classified divergent when the last increment is at
    least `ratio` times the previous one.

    Args:
        rho: Vectorized modulus
        decades: Increasing decimal exponents k
        ratio: Threshold on the ratio of the last two increments

    Returns:
        (divergent, partial_integrals) with one partial integral per decade
    """
    def integrand(s):
        u = np.exp(s)
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(u / np.asarray(rho(u), dtype=float))

    partial = []
    total = 0.0
    upper = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for k in decades:
            lower = -k * np.log(10.0)
            piece, _ = integrate.quad(integrand, lower, upper, limit=200)
            total += piece
            partial.append(total)
            upper = lower

    if not np.all(np.isfinite(partial)):
        return True, partial
    increments = np.diff([0.0] + partial)
    if len(increments) < 2 or increments[-2] <= 0:
        return False, partial
    return bool(increments[-1] >= ratio * increments[-2]), partial


def concave_nondecreasing(rho, upper=10.0, points=1001, atol=CHECK_ATOL):
    """
    Check rho(0) = 0, rho > 0 away from 0, nondecrease and concavity on a grid

    Returns:
        (passed, worst) where worst names the first failing property or None
    """
    u = np.linspace(0.0, upper, points)
    values = np.asarray(rho(u), dtype=float)
    scale = atol * (1.0 + np.abs(values).max(initial=0.0))
    if not np.all(np.isfinite(values)):
        return False, "non-finite"
    if abs(values[0]) > scale:
        return False, "rho(0) != 0"
    if np.any(values[1:] <= 0):
        return False, "not positive"
    if np.any(np.diff(values) < -scale):
        return False, "decreasing"
    if np.any(np.diff(values, 2) > scale):
        return False, "not concave"
    return True, None


def linear_growth(phi, points=121):
    """
    Check phi(0) = 0, phi nondecreasing and phi(u) <= a + b u

    The growth test asks phi(u) / (1 + u) not to grow over the last decade
    of a log grid reaching 10^6.

    Returns:
        (passed, worst) where worst names the first failing property or None
    """
    u = np.concatenate([[0.0], np.logspace(-6, 6, points)])
    values = np.asarray(phi(u), dtype=float)
    if not np.all(np.isfinite(values)):
        return False, "non-finite"
    if abs(values[0]) > CHECK_ATOL:
        return False, "phi(0) != 0"
    if np.any(np.diff(values) < -CHECK_ATOL * (1.0 + np.abs(values[1:]))):
        return False, "decreasing"
    ratios = values / (1.0 + u)
    decade = (points - 1) // 12
    if ratios[-1] > ratios[-1 - decade] * 1.001 + CHECK_ATOL:
        return False, "superlinear"
    return True, None
