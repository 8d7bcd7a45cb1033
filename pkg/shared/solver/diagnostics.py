"""
S^beta / M^beta functionals and class-(D) tail probes of a solve
"""

from dataclasses import dataclass, field

import numpy as np

from ..config.numerics_config import CLASS_D_LEVELS


@dataclass
class Diagnostics:
    """
    Monte Carlo diagnostics of a backward solve

    Attributes:
        betas: Exponents in (0, 1)
        s_beta: beta -> E[sup_t |Y_t|^beta]^(1 ^ 1/beta)
        s_beta_stderr: Standard errors of s_beta
        m_beta: beta -> E[(sum |Z|^2 dt)^(beta/2)]^(1 ^ 1/beta)
        m_beta_stderr: Standard errors of m_beta
        regression_residual: RMS residual of the Y regression per step
        regression_bound: Residual * sqrt(basis size / M) per step
        picard_iterations: Picard iterations used per step
        fallback_paths: Paths finished by bisection per step
        class_d_tail: L -> max_i E[|Y_i| 1{|Y_i| > L}]
    """

    betas: tuple
    s_beta: dict
    s_beta_stderr: dict
    m_beta: dict
    m_beta_stderr: dict
    regression_residual: list = field(default_factory=list)
    regression_bound: list = field(default_factory=list)
    picard_iterations: list = field(default_factory=list)
    fallback_paths: list = field(default_factory=list)
    class_d_tail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "betas": list(self.betas),
            "s_beta": {str(beta): value for beta, value in self.s_beta.items()},
            "s_beta_stderr": {str(beta): value for beta, value in self.s_beta_stderr.items()},
            "m_beta": {str(beta): value for beta, value in self.m_beta.items()},
            "m_beta_stderr": {str(beta): value for beta, value in self.m_beta_stderr.items()},
            "regression_residual": list(self.regression_residual),
            "regression_bound": list(self.regression_bound),
            "picard_iterations": list(self.picard_iterations),
            "fallback_paths": list(self.fallback_paths),
            "class_d_tail": {str(level): value for level, value in self.class_d_tail.items()},
        }


def normalized_moment(samples, beta):
    """
    (E[X])^(1 ^ 1/beta) for X = samples, with a delta-method standard error

    Returns:
        (estimate, stderr)
    """
    samples = np.asarray(samples, dtype=float)
    raw = float(samples.mean())
    raw_se = float(samples.std(ddof=1) / np.sqrt(samples.size)) if samples.size > 1 else 0.0
    exponent = min(1.0, 1.0 / beta)
    if exponent == 1.0:
        return raw, raw_se
    if raw <= 0:
        return 0.0, 0.0
    return raw ** exponent, exponent * raw ** (exponent - 1.0) * raw_se


def diagnostics_report(result):
    """
    Estimate the S^beta and M^beta functionals of a SolveResult

    Uses result.Y [M, N+1], result.Z [M, N, d], the grid step sizes and
    the per-step statistics the solver recorded.
    """
    Y = np.asarray(result.Y, dtype=float)
    Z = np.asarray(result.Z, dtype=float)
    steps = result.grid.steps

    sup_abs = np.abs(Y).max(axis=1)
    quadratic = np.einsum("mid,i->m", Z * Z, steps)

    s_beta, s_se, m_beta, m_se = {}, {}, {}, {}
    for beta in result.config.betas:
        s_beta[beta], s_se[beta] = normalized_moment(sup_abs ** beta, beta)
        m_beta[beta], m_se[beta] = normalized_moment(quadratic ** (beta / 2.0), beta)

    abs_y = np.abs(Y)
    tails = {}
    for level in CLASS_D_LEVELS:
        tails[level] = float(np.max(np.mean(np.where(abs_y > level, abs_y, 0.0), axis=0)))

    stats = result.step_stats
    return Diagnostics(
        betas=tuple(result.config.betas),
        s_beta=s_beta,
        s_beta_stderr=s_se,
        m_beta=m_beta,
        m_beta_stderr=m_se,
        regression_residual=[float(v) for v in stats["residual"]],
        regression_bound=[float(v) for v in stats["bound"]],
        picard_iterations=[int(v) for v in stats["picard"]],
        fallback_paths=[int(v) for v in stats["fallback"]],
        class_d_tail=tails,
    )
