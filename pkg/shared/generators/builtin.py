"""
Small reference generators used as controls, violators and closed-form cases
"""

import numpy as np

from .spec import (
    AssumptionParams,
    GeneratorSpec,
    constant_process,
    linear_modulus,
    norm,
    zero_process,
)

# Flags satisfied by any bounded generator that is Lipschitz in y and 1/2-Hoelder in z
_REGULAR_FLAGS = {"H1", "H1'", "H1a", "H1b", "H2", "H2'", "H3", "H4", "H4'", "H4''", "H4*", "H5"}


def zero_generator(d=1):
    """g = 0"""
    def func(t, b, y, z):
        return np.zeros(np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1]))

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, C=1.0, gamma=1.0,
                              rho=linear_modulus(1.0), phi=linear_modulus(1.0),
                              flags=_REGULAR_FLAGS)
    return GeneratorSpec(func=func, params=params, label="zero", d=d, depends_on=frozenset())


def constant_generator(c=1.0, d=1):
    """g = c"""
    c = float(c)

    def func(t, b, y, z):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.full(shape, c)

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, C=1.0, gamma=1.0,
                              f_process=constant_process(abs(c)),
                              rho=linear_modulus(1.0), phi=linear_modulus(1.0),
                              flags=_REGULAR_FLAGS)
    return GeneratorSpec(func=func, params=params, label=f"constant({c:g})", d=d, depends_on=frozenset())


def linear_y_generator(a=-1.0, d=1, mu=None):
    """
    g = a * y

    Args:
        a: Slope in y
        d: Brownian dimension
        mu: Declared monotonicity constant (defaults to max(a, 0); a smaller
            value turns the generator into an (H2) violator)
    """
    a = float(a)
    mu = max(a, 0.0) if mu is None else float(mu)

    def func(t, b, y, z):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(z)[:-1])
        return np.broadcast_to(a * y, np.broadcast_shapes(shape, np.shape(y))).copy()

    params = AssumptionParams(mu=mu, lam=1.0, alpha=0.5, C=max(abs(a), 1.0), gamma=1.0,
                              rho=linear_modulus(max(a, 0.0) or 1.0), phi=linear_modulus(1.0),
                              flags=_REGULAR_FLAGS)
    label = "neg_y" if a == -1.0 else f"linear_y({a:g})"
    return GeneratorSpec(func=func, params=params, label=label, d=d, depends_on=frozenset({"y"}))


def neg_y_generator(d=1):
    """g = -y"""
    return linear_y_generator(-1.0, d=d)


def sqrt_abs_z_generator(d=1):
    """g = sqrt|z|; already 1/2-Hoelder with constant 1, so it is its own envelope"""
    def func(t, b, y, z):
        return np.broadcast_to(np.sqrt(norm(z)), np.broadcast_shapes(
            np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])).copy()

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, C=1.0, gamma=1.0,
                              f_process=constant_process(1.0),
                              rho=linear_modulus(1.0), phi=np.sqrt,
                              flags=_REGULAR_FLAGS)
    return GeneratorSpec(func=func, params=params, label="sqrt_abs_z", d=d, depends_on=frozenset({"z"}))


def min_abs_z_one_generator(d=1):
    """g = min(|z|, 1)"""
    def func(t, b, y, z):
        return np.broadcast_to(np.minimum(norm(z), 1.0), np.broadcast_shapes(
            np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])).copy()

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, C=1.0, gamma=1.0,
                              f_process=constant_process(1.0),
                              rho=linear_modulus(1.0), phi=linear_modulus(1.0),
                              flags=_REGULAR_FLAGS)
    return GeneratorSpec(func=func, params=params, label="min_abs_z_one", d=d, depends_on=frozenset({"z"}))


def abs_z_generator(d=1):
    """
    g = |z|

    Declares (H4) with lambda = 1, alpha = 1/2, f = 1, which large |z| refutes.
    """
    def func(t, b, y, z):
        return np.broadcast_to(norm(z), np.broadcast_shapes(
            np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])).copy()

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, f_process=constant_process(1.0),
                              flags={"H1", "H1'", "H2", "H3", "H4"})
    return GeneratorSpec(func=func, params=params, label="abs_z", d=d, depends_on=frozenset({"z"}))


def step_y_right_generator(d=1):
    """g = 1_{y>0}: left-continuous and lower semicontinuous at 0"""
    def func(t, b, y, z):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.broadcast_to(np.where(y > 0, 1.0, 0.0), shape).copy()

    params = AssumptionParams(C=1.0, alpha=0.5, f_process=constant_process(1.0), flags={"H1a", "H5"})
    return GeneratorSpec(func=func, params=params, label="step_y_right", d=d, depends_on=frozenset({"y"}))


def step_y_closed_generator(d=1):
    """
    g = 1_{y>=0}

    Declares (H1a) although it jumps at 0 from the left; the one-sided probe
    refutes it with gap 1.
    """
    def func(t, b, y, z):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.broadcast_to(np.where(y >= 0, 1.0, 0.0), shape).copy()

    params = AssumptionParams(C=1.0, alpha=0.5, f_process=constant_process(1.0), flags={"H1a", "H5"})
    return GeneratorSpec(func=func, params=params, label="step_y_closed", d=d, depends_on=frozenset({"y"}))


def oscillating_z_generator(omega=1e4, d=1):
    """
    g = sin(omega * z_1 |z_1|)

    Bounded and continuous, (H4) and (H4') hold with f = 1, but the
    oscillation speeds up with |z| so no uniform modulus (H4*) exists.
    Its inf- and sup-approximants stay apart, which makes it the power
    control for uniqueness runs.
    """
    omega = float(omega)

    def func(t, b, y, z):
        z1 = z[..., 0]
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.broadcast_to(np.sin(omega * z1 * np.abs(z1)), shape).copy()

    params = AssumptionParams(mu=0.0, lam=1.0, alpha=0.5, C=1.0, f_process=constant_process(1.0),
                              flags={"H1", "H1'", "H2", "H3", "H4", "H4'", "H5"})
    return GeneratorSpec(func=func, params=params, label="oscillating_z", d=d, depends_on=frozenset({"z"}))


def lipschitz_yz_generator(a=-1.0, c=0.5, d=1):
    """
    g = a * y + c * sin(z_1)

    Lipschitz in (y, z) with bounded z-part, 1/2-Hoelder in z with
    gamma = 2|c|; every envelope with n + lambda >= gamma returns g itself.
    """
    a = float(a)
    c = float(c)
    gamma = max(2.0 * abs(c), 1e-12)

    def func(t, b, y, z):
        shape = np.broadcast_shapes(np.shape(t), np.shape(b)[:-1], np.shape(y), np.shape(z)[:-1])
        return np.broadcast_to(a * y + c * np.sin(z[..., 0]), shape).copy()

    params = AssumptionParams(mu=max(a, 0.0), lam=max(gamma, 1.0), alpha=0.5, C=max(abs(a), abs(c), 1.0),
                              gamma=gamma, f_process=constant_process(max(abs(c), 1.0)),
                              rho=linear_modulus(max(abs(a), 1.0)), phi=linear_modulus(max(abs(c), 1e-12)),
                              flags=_REGULAR_FLAGS)
    return GeneratorSpec(func=func, params=params, label="lipschitz_yz", d=d, depends_on=frozenset({"y", "z"}))
