"""
Approximating and dominating generators built from a base generator
"""

import numpy as np

from .envelope import EnvelopeKind, envelope_batch, penalty_constants
from ..config.numerics_config import DEFAULT_ENVELOPE_TOL
from ..generators.spec import ALL_VARIABLES, AssumptionParams, GeneratorSpec, linear_modulus, norm


def _approximant_params(g, n, kind):
    constant, alpha, f_process = penalty_constants(g, kind)
    flags = {"H1", "H1'"} & g.params.flags

    if kind.joint:
        weight = n * constant
        # nC-Lipschitz in y and nC-Hoelder(alpha) in z, same (H5) bound as g
        flags |= {"H2", "H4", "H4''", "H5"}
        return AssumptionParams(
            mu=weight, lam=max(constant, 1.0), alpha=alpha, C=constant, gamma=weight,
            f_process=f_process, rho=linear_modulus(weight),
            flags=flags,
        )

    weight = n + constant
    flags |= {"H4", "H4''"}
    flags |= {"H2", "H3"} & g.params.flags
    if "H2'" in g.params.flags:
        flags.add("H2'")
    return AssumptionParams(
        mu=g.params.mu, lam=2.0 * constant, alpha=alpha, gamma=weight,
        f_process=f_process, rho=g.params.rho,
        phi=lambda u, w=weight, a=alpha: w * np.asarray(u, dtype=float) ** a,
        flags=flags,
    )


def approximating_generator(g, n, kind=EnvelopeKind.INF_Z, tol=DEFAULT_ENVELOPE_TOL, workers=None):
    """
    The n-th envelope of g as a generator in its own right

    Args:
        g: Base GeneratorSpec
        n: Envelope index
        kind: EnvelopeKind or its name
        tol: Optimizer tolerance of every evaluation
        workers: Thread count for envelope chunks

    Returns:
        GeneratorSpec whose func evaluates envelope_batch pointwise; its
        params declare what the envelope inherits from g
    """
    kind = EnvelopeKind.parse(kind)
    params = _approximant_params(g, n, kind)

    searched = {"z"} if not kind.joint else {"y", "z"}
    depends_on = g.depends_on | searched if searched & g.depends_on else g.depends_on

    def func(t, b, y, z):
        return envelope_batch(g, n, kind, t, b, y, z, tol=tol, workers=workers).value

    return GeneratorSpec(
        func=func,
        params=params,
        label=f"{g.label}|{kind.value}[{n}]",
        d=g.d,
        depends_on=depends_on,
        singular_times=g.singular_times,
    )


def dominating_generator(g, kind=EnvelopeKind.INF_Z):
    """
    Generator bounding every approximant of the given kind

    INF_Z:  g(t, b, y, 0) + lam (f + |y| + |z|^alpha)
    SUP_Z:  g(t, b, y, 0) - lam (f + |y| + |z|^alpha)
    INF_YZ: f + C (|y| + |z|^alpha)
    SUP_YZ: -(f + C (|y| + |z|^alpha))

    INF kinds give an upper bound of the nondecreasing approximants, SUP
    kinds a lower bound of the nonincreasing ones.
    """
    kind = EnvelopeKind.parse(kind)
    constant, alpha, f_process = penalty_constants(g, kind)
    sign = -1.0 if kind.sup else 1.0

    if kind.joint:
        def func(t, b, y, z):
            return sign * (f_process(t, b) + constant * (np.abs(y) + norm(z) ** alpha))

        params = AssumptionParams(
            mu=constant if not kind.sup else 0.0, lam=max(constant, 1.0), alpha=alpha,
            C=constant, gamma=constant, f_process=f_process,
            rho=linear_modulus(constant), phi=lambda u: constant * np.asarray(u, dtype=float) ** alpha,
            flags={"H1", "H1'", "H1a", "H1b", "H2", "H2'", "H4", "H4''", "H4*", "H5"},
        )
    else:
        def func(t, b, y, z):
            at_zero = g.eval(t, b, y, np.zeros_like(z))
            return at_zero + sign * constant * (f_process(t, b) + np.abs(y) + norm(z) ** alpha)

        mu = g.params.mu
        if mu is not None and not kind.sup:
            mu = mu + constant
        flags = {"H4", "H4''"} | ({"H1", "H1'", "H2", "H3"} & g.params.flags)
        if mu is None:
            flags.discard("H2")
        params = AssumptionParams(
            mu=mu, lam=2.0 * constant, alpha=alpha, gamma=constant, f_process=f_process,
            flags=flags,
        )

    return GeneratorSpec(
        func=func,
        params=params,
        label=f"{g.label}|dominating_{kind.value}",
        d=g.d,
        depends_on=ALL_VARIABLES,
        singular_times=g.singular_times,
    )

