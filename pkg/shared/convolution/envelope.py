"""
Hoelder inf/sup-convolutions of a generator and their certified search radii

Four kinds are supported:

    INF_Z   inf_u  g(t, b, y, u) + (n + lam)|u - z|^alpha
    SUP_Z   sup_u  g(t, b, y, u) - (n + lam)|u - z|^alpha
    INF_YZ  inf_uv g(t, b, u, v) + n C (|y - u| + |z - v|^alpha)
    SUP_YZ  sup_uv g(t, b, u, v) - n C (|y - u| + |z - v|^alpha)

The growth bound the generator claims makes the penalty coercive, so each
infimum over the whole space equals the infimum over a box whose half-width
is computed here. The box is searched by shared.convolution.search.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .search import box_minimize
from ..config.numerics_config import (
    DEFAULT_ENVELOPE_TOL,
    JOINT_COERCIVITY_FLOOR,
    MAX_ENVELOPE_DIM,
)
from ..errors import (
    ContractError,
    EvaluationError,
    InvalidArgumentError,
    UnsupportedDimensionError,
)
from ..generators.spec import norm
from ..utils.logging import get_logger

logger = get_logger(__name__)


class EnvelopeKind(Enum):
    INF_Z = "INF_Z"
    SUP_Z = "SUP_Z"
    INF_YZ = "INF_YZ"
    SUP_YZ = "SUP_YZ"

    @property
    def joint(self):
        return self in (EnvelopeKind.INF_YZ, EnvelopeKind.SUP_YZ)

    @property
    def sup(self):
        return self in (EnvelopeKind.SUP_Z, EnvelopeKind.SUP_YZ)

    @property
    def mirror(self):
        """The kind with the opposite inf/sup direction"""
        return {
            EnvelopeKind.INF_Z: EnvelopeKind.SUP_Z,
            EnvelopeKind.SUP_Z: EnvelopeKind.INF_Z,
            EnvelopeKind.INF_YZ: EnvelopeKind.SUP_YZ,
            EnvelopeKind.SUP_YZ: EnvelopeKind.INF_YZ,
        }[self]

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise InvalidArgumentError(f"Unknown envelope kind: {value}. Available: {[k.value for k in cls]}")


def _check_index(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidArgumentError(f"envelope index n must be a positive integer, got {n}")
    return int(n)


def _check_tol(tol):
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    return float(tol)


def penalty_constants(g, kind):
    """
    (weight-free constant, alpha, f_process) behind the penalty of a kind

    INF_Z/SUP_Z use the (H4) constants (lam, alpha, f); INF_YZ/SUP_YZ use
    the (H5) constants (C, alpha, f).
    """
    kind = EnvelopeKind.parse(kind)
    if kind.joint:
        if not g.has("H5"):
            raise ContractError(f"{kind.value} envelopes need {g.label} to claim H5")
        return g.h5_constants()
    if not (g.has("H4") or g.has("H4'") or g.has("H4''")):
        raise ContractError(f"{kind.value} envelopes need {g.label} to claim H4 (or H4', H4'')")
    return g.h4_constants()


def penalty_weight(g, n, kind):
    """n + lam for the Z kinds, n C for the joint kinds"""
    kind = EnvelopeKind.parse(kind)
    constant, _, _ = penalty_constants(g, kind)
    return n * constant if kind.joint else n + constant


def search_radius_z(g, n, t, b, y, z, tol=DEFAULT_ENVELOPE_TOL):
    """
    Radius around z outside which no u can improve on u = z

    R = [2 lam (f + |y| + |z|^alpha) / n]^(1/alpha) + tol

    Args:
        g: Generator claiming H4 (or H4', H4'')
        n: Envelope index, positive integer
        t, b, y, z: Query point, broadcastable (b and z carry a trailing axis d)
        tol: Optimizer tolerance

    Returns:
        Array of radii with the broadcast shape of the point
    """
    n = _check_index(n)
    tol = _check_tol(tol)
    lam, alpha, f_process = penalty_constants(g, EnvelopeKind.INF_Z)
    budget = f_process(np.asarray(t, dtype=float), np.asarray(b, dtype=float)) \
        + np.abs(np.asarray(y, dtype=float)) + norm(np.asarray(z, dtype=float)) ** alpha
    return (2.0 * lam * budget / n) ** (1.0 / alpha) + tol


def search_radius_yz(g, n, t, b, y, z, tol=DEFAULT_ENVELOPE_TOL):
    """
    Radii (r_y, r_z) of the joint search box

        r_y = 2 (f + C|y| + C|z|^alpha) / ((n - 1) C) + tol
        r_z = [2 (f + C|y| + C|z|^alpha) / ((n - 1) C)]^(1/alpha) + tol

    At n = 1 the coercivity budget vanishes; JOINT_COERCIVITY_FLOOR replaces
    n - 1 and the resulting box is not a certificate.
    """
    n = _check_index(n)
    tol = _check_tol(tol)
    C, alpha, f_process = penalty_constants(g, EnvelopeKind.INF_YZ)
    budget = f_process(np.asarray(t, dtype=float), np.asarray(b, dtype=float)) \
        + C * np.abs(np.asarray(y, dtype=float)) + C * norm(np.asarray(z, dtype=float)) ** alpha
    coercivity = max(n - 1.0, JOINT_COERCIVITY_FLOOR) * C
    reach = 2.0 * budget / coercivity
    return reach + tol, reach ** (1.0 / alpha) + tol


@dataclass(frozen=True)
class EnvelopeQuery:
    """
    One envelope evaluation request

    Attributes:
        g: GeneratorSpec
        n: Envelope index
        t, b, y, z: Query point (b and z of length d)
        kind: EnvelopeKind or its name
        tol: Optimizer tolerance
    """

    g: object
    n: int
    t: float
    b: object
    y: float
    z: object
    kind: object = EnvelopeKind.INF_Z
    tol: float = DEFAULT_ENVELOPE_TOL

    def __post_init__(self):
        object.__setattr__(self, "kind", EnvelopeKind.parse(self.kind))
        object.__setattr__(self, "n", _check_index(self.n))
        _check_tol(self.tol)
        if self.g.d > MAX_ENVELOPE_DIM:
            raise UnsupportedDimensionError(f"envelopes support d <= {MAX_ENVELOPE_DIM}, got d={self.g.d}")
        b = np.atleast_1d(np.asarray(self.b, dtype=float))
        z = np.atleast_1d(np.asarray(self.z, dtype=float))
        if b.shape != (self.g.d,) or z.shape != (self.g.d,):
            raise InvalidArgumentError(f"b and z must have length d={self.g.d}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "z", z)
        penalty_constants(self.g, self.kind)


@dataclass(frozen=True)
class EnvelopeResult:
    """
    Attributes:
        value: Envelope value
        optimizer_y: y-coordinate of the optimizer (the query y for Z kinds)
        optimizer_z: z-coordinate of the optimizer, length d
        search_radius: Half-width of the z-search box
        search_radius_y: Half-width of the y-search box (joint kinds, else 0)
        certified_gap: Estimated bound on |value - true envelope|
        certified: certified_gap <= tol and the box is a valid certificate
    """

    value: float
    optimizer_y: float
    optimizer_z: np.ndarray
    search_radius: float
    search_radius_y: float
    certified_gap: float
    certified: bool

    def as_row(self):
        return {
            "value": self.value,
            "gap": self.certified_gap,
            "radius": self.search_radius,
            "radius_y": self.search_radius_y,
            "certified": self.certified,
        }


@dataclass
class EnvelopeBatch:
    """Array form of EnvelopeResult; every field has the query's broadcast shape"""

    value: np.ndarray
    optimizer_y: np.ndarray
    optimizer_z: np.ndarray
    search_radius: np.ndarray
    search_radius_y: np.ndarray
    certified_gap: np.ndarray
    certified: np.ndarray

    def result(self, index=()):
        return EnvelopeResult(
            value=float(self.value[index]),
            optimizer_y=float(self.optimizer_y[index]),
            optimizer_z=np.array(self.optimizer_z[index]),
            search_radius=float(self.search_radius[index]),
            search_radius_y=float(self.search_radius_y[index]),
            certified_gap=float(self.certified_gap[index]),
            certified=bool(self.certified[index]),
        )


def penalty_modulus(weight, alpha, distance, step):
    """
    Largest change of weight * |v - z|^alpha over a cell of width step
    whose center sits at the given distance from z

    Away from z the penalty is smooth and the change is linear in step;
    at distance 0 it is weight * step^alpha.
    """
    distance = np.asarray(distance, dtype=float)
    outward = (distance + step) ** alpha - distance ** alpha
    inward = distance ** alpha - np.maximum(distance - step, 0.0) ** alpha
    return weight * np.maximum(outward, inward)


def _raise_non_finite(g, values, t, b, y, u, v):
    bad = np.argwhere(~np.isfinite(values))[0]
    row, col = bad[0], bad[1]
    point = {
        "t": float(t[row]),
        "b": b[row].tolist(),
        "y": float(u[row, col]) if u is not None else float(y[row]),
        "z": v[row, col].tolist(),
    }
    raise EvaluationError(f"{g.label} is not finite at {point}", point=point)


def envelope_batch(g, n, kind, t, b, y, z, tol=DEFAULT_ENVELOPE_TOL, workers=None):
    """
    Evaluate an envelope at many points with one vectorized search

    Args:
        g: GeneratorSpec
        n: Envelope index
        kind: EnvelopeKind or its name
        t: Times, shape (...)
        b: Brownian states, shape (..., d)
        y: Values, shape (...)
        z: Controls, shape (..., d)
        tol: Optimizer tolerance
        workers: Thread count for chunks of points

    Returns:
        EnvelopeBatch with the broadcast shape of the points

    Raises:
        UnsupportedDimensionError: d > 2
        ContractError: g lacks the growth flags of the kind
        EvaluationError: g is not finite inside the search box
    """
    kind = EnvelopeKind.parse(kind)
    n = _check_index(n)
    tol = _check_tol(tol)
    d = g.d
    if d > MAX_ENVELOPE_DIM:
        raise UnsupportedDimensionError(f"envelopes support d <= {MAX_ENVELOPE_DIM}, got d={d}")
    constant, alpha, _ = penalty_constants(g, kind)
    weight = penalty_weight(g, n, kind)

    t = np.asarray(t, dtype=float)
    b = np.asarray(b, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    shape = np.broadcast_shapes(t.shape, b.shape[:-1], y.shape, z.shape[:-1])
    t = np.broadcast_to(t, shape).reshape(-1)
    y = np.broadcast_to(y, shape).reshape(-1)
    b = np.broadcast_to(b, shape + (d,)).reshape(-1, d)
    z = np.broadcast_to(z, shape + (d,)).reshape(-1, d)
    P = t.shape[0]
    sign = -1.0 if kind.sup else 1.0

    if kind.joint:
        radius_y, radius_z = search_radius_yz(g, n, t, b, y, z, tol)
    else:
        radius_z = search_radius_z(g, n, t, b, y, z, tol)
        radius_y = np.zeros(P)

    searched = {"z"} if not kind.joint else {"y", "z"}
    if not (searched & g.depends_on):
        value = g.eval(t, b, y, z)
        if not np.all(np.isfinite(value)):
            _raise_non_finite(g, value[:, None], t, b, y, None, z[:, None, :])
        logger.debug(f"{g.label} {kind.value} n={n}: {P} points, fixed point")
        return EnvelopeBatch(
            value=value.reshape(shape),
            optimizer_y=y.reshape(shape),
            optimizer_z=z.reshape(shape + (d,)),
            search_radius=np.broadcast_to(radius_z, (P,)).reshape(shape),
            search_radius_y=np.broadcast_to(radius_y, (P,)).reshape(shape),
            certified_gap=np.zeros(shape),
            certified=np.full(shape, not (kind.joint and n == 1)),
        )

    if kind.joint:
        def objective(rows, points):
            u = points[..., 0]
            v = points[..., 1:]
            values = g.eval(t[rows, None], b[rows, None, :], u, v)
            if not np.all(np.isfinite(values)):
                _raise_non_finite(g, values, t[rows], b[rows], y[rows], u, v)
            penalty = np.abs(y[rows, None] - u) + norm(z[rows, None, :] - v) ** alpha
            return sign * values + weight * penalty

        centers = np.concatenate([y[:, None], z], axis=1)
        half_widths = np.concatenate([radius_y[:, None], np.repeat(radius_z[:, None], d, axis=1)], axis=1)
        cell = tol / (4.0 * weight)
        pitch = np.concatenate([np.full((P, 1), cell), np.full((P, d), cell ** (1.0 / alpha) / np.sqrt(d))], axis=1)

        def cell_modulus(rows, location, spacing):
            step_v = np.sqrt(np.sum(spacing[:, 1:] ** 2, axis=1))
            distance = norm(location[:, 1:] - z[rows])
            return weight * spacing[:, 0] + penalty_modulus(weight, alpha, distance, step_v)
    else:
        def objective(rows, points):
            values = g.eval(t[rows, None], b[rows, None, :], y[rows, None], points)
            if not np.all(np.isfinite(values)):
                _raise_non_finite(g, values, t[rows], b[rows], y[rows], None, points)
            return sign * values + weight * norm(points - z[rows, None, :]) ** alpha

        centers = z
        half_widths = np.repeat(radius_z[:, None], d, axis=1)
        pitch = np.full((P, d), (tol / (2.0 * weight)) ** (1.0 / alpha) / np.sqrt(d))

        def cell_modulus(rows, location, spacing):
            step_v = np.sqrt(np.sum(spacing ** 2, axis=1))
            return penalty_modulus(weight, alpha, norm(location - z[rows]), step_v)

    def settled(rows, location, spacing):
        return cell_modulus(rows, location, spacing) <= 0.5 * tol

    found = box_minimize(objective, centers, half_widths, pitch, workers=workers, settled=settled)

    # Penalty modulus over one final cell plus any descent left at the stencil
    modulus = cell_modulus(np.arange(P), found.location, found.spacing)
    if kind.joint:
        optimizer_y = found.location[:, 0]
        optimizer_z = found.location[:, 1:]
    else:
        optimizer_y = y
        optimizer_z = found.location
    gap = modulus + found.descent
    certified = gap <= tol
    if kind.joint and n == 1:
        certified = np.zeros(P, dtype=bool)

    uncertified = int(P - np.count_nonzero(certified))
    if uncertified:
        logger.debug(f"{g.label} {kind.value} n={n}: {uncertified} of {P} points above tol={tol:g}")
    logger.debug(f"{g.label} {kind.value} n={n}: {P} points, max zoom level {int(found.levels.max(initial=0))}")

    return EnvelopeBatch(
        value=(sign * found.value).reshape(shape),
        optimizer_y=optimizer_y.reshape(shape),
        optimizer_z=optimizer_z.reshape(shape + (d,)),
        search_radius=radius_z.reshape(shape),
        search_radius_y=radius_y.reshape(shape),
        certified_gap=gap.reshape(shape),
        certified=certified.reshape(shape),
    )


def envelope(query):
    """
    Evaluate one envelope query

    Args:
        query: EnvelopeQuery

    Returns:
        EnvelopeResult
    """
    batch = envelope_batch(
        query.g, query.n, query.kind,
        np.array([query.t]), query.b[None, :], np.array([query.y]), query.z[None, :],
        tol=query.tol, workers=1,
    )
    return batch.result(0)
