"""
Radial truncation in y and the sign-weighted growth bound of (H2) + (H4) generators
"""

import numpy as np

from .spec import sign
from ..errors import ContractError, InvalidArgumentError


def truncate_y(y, k):
    """
    rho_k(y) = y k / max(|y|, k)

    Equals y inside [-k, k] and sgn(y) k outside; 1-Lipschitz and idempotent.

    Args:
        y: Scalar or array
        k: Truncation level, strictly positive

    Returns:
        Array (or float for scalar input)
    """
    if not k > 0:
        raise InvalidArgumentError(f"truncation level must be positive, got {k}")
    y = np.asarray(y, dtype=np.float64)
    result = np.where(np.abs(y) <= k, y, np.sign(y) * k)
    return float(result) if result.ndim == 0 else result


def remark1_bound(g, t, b, y, z):
    """
    Sign-weighted growth inequality implied by (H2) and (H4)

        g(t, b, y, z) sgn(y) <= |g(t, b, 0, 0)| + lam f + (lam + mu)|y| + lam |z|

    Returns:
        (lhs, rhs) arrays with the broadcast shape of the inputs
    """
    if not g.has("H2"):
        raise ContractError(f"the growth bound needs {g.label} to claim H2")
    try:
        lam, _, f_process = g.h4_constants()
    except ContractError as e:
        raise ContractError(f"the growth bound needs {g.label} to claim H4: {e}")
    mu = g.params.mu

    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)

    lhs = g.eval(t, b, y, z) * sign(y)
    origin = g.eval(t, b, np.zeros_like(y), np.zeros_like(z))
    abs_z = np.sqrt(np.sum(z ** 2, axis=-1))
    rhs = np.abs(origin) + lam * f_process(t, b) + (lam + mu) * np.abs(y) + lam * abs_z
    return lhs, rhs
