"""
Least-squares conditional expectations on Brownian states
"""

from itertools import product

import numpy as np
from numpy.polynomial import hermite_e

from .config import LOCAL_BASIS
from ..config.numerics_config import MAX_CONDITION_NUMBER
from ..errors import BasisError


def hermite_design(states, t, degree):
    """
    Probabilists' Hermite polynomials of B_t / sqrt(t) with total degree <= degree

    Args:
        states: Brownian states, shape (M, d)
        t: Time of the states (t > 0)
        degree: Maximal total degree

    Returns:
        Design matrix (M, columns), constant column first
    """
    x = states / np.sqrt(t)
    d = x.shape[1]
    per_axis = [hermite_e.hermevander(x[:, k], degree) for k in range(d)]
    if d == 1:
        return per_axis[0]
    columns = []
    for exponents in product(range(degree + 1), repeat=d):
        if sum(exponents) <= degree:
            column = np.ones(x.shape[0])
            for k, e in enumerate(exponents):
                column = column * per_axis[k][:, e]
            columns.append(column)
    return np.stack(columns, axis=1)


class Projection:
    """
    Regression onto the basis of one time step

    The constant basis is used when t = 0 (all paths share B_0 = 0).
    condition holds the 2-norm condition number of the design; polynomial
    bases set it on the first fit.
    """

    def __init__(self, cfg, states, t, step):
        self.step = step
        self.M = states.shape[0]
        self.constant = t <= 0.0
        self.local = cfg.basis == LOCAL_BASIS and not self.constant

        self.condition = 1.0

        if self.constant:
            self.size = 1
        elif self.local:
            x = states[:, 0]
            edges = np.quantile(x, np.linspace(0.0, 1.0, cfg.bins + 1))
            raw = np.searchsorted(edges[1:-1], x, side="right")
            occupied, self.ids = np.unique(raw, return_inverse=True)
            self.counts = np.bincount(self.ids).astype(float)
            self.size = len(occupied)
            # Indicator columns are orthogonal with norms sqrt(count), so those
            # norms are the singular values of the design
            singular = np.sqrt(self.counts)
            self.condition = float(singular.max() / singular.min())
            self._check_condition(self.condition, "fewer bins")
        else:
            self.design = hermite_design(states, t, cfg.degree)
            self.size = self.design.shape[1]

    def _check_condition(self, condition, suggestion):
        if not np.isfinite(condition) or condition > MAX_CONDITION_NUMBER:
            raise BasisError(
                f"regression at step {self.step} is ill-conditioned (condition number {condition:.3e}); "
                f"try {suggestion}",
                step=self.step, condition_number=condition,
            )

    def fit(self, values):
        """
        Project values (M,) or (M, k) on the basis

        Returns:
            (fitted values of the same shape, RMS residual per column)
        """
        values = np.asarray(values, dtype=float)
        matrix = values.reshape(self.M, -1)

        if self.constant:
            fitted = np.broadcast_to(matrix.mean(axis=0), matrix.shape).copy()
        elif self.local:
            columns = [np.bincount(self.ids, weights=matrix[:, j]) / self.counts for j in range(matrix.shape[1])]
            fitted = np.stack([column[self.ids] for column in columns], axis=1)
        else:
            coefficients, _, rank, singular = np.linalg.lstsq(self.design, matrix, rcond=None)
            condition = singular[0] / singular[-1] if rank == self.design.shape[1] and singular[-1] > 0 else np.inf
            self.condition = float(condition)
            self._check_condition(self.condition, "a lower degree or the local basis")
            fitted = self.design @ coefficients

        residual = np.sqrt(np.mean((matrix - fitted) ** 2, axis=0))
        return fitted.reshape(values.shape), residual

    def bound(self, residual):
        """Regression error bound RMS residual * sqrt(columns / M)"""
        return float(np.max(residual)) * np.sqrt(self.size / self.M)
