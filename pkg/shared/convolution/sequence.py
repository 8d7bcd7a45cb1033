"""
Property reports over envelope sequences: monotonicity in n, sandwich
bounds, modulus certificates and convergence along trajectories
"""

from dataclasses import dataclass, field

import numpy as np

from .envelope import EnvelopeKind, envelope_batch, penalty_constants, penalty_weight
from ..config.numerics_config import DEFAULT_ENVELOPE_TOL
from ..errors import InvalidArgumentError
from ..generators.spec import norm
from ..utils.logging import get_logger

logger = get_logger(__name__)


@dataclass
class PointSet:
    """Query points; t and y have shape (P,), b and z shape (P, d)"""

    t: np.ndarray
    b: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __len__(self):
        return len(self.t)

    def point(self, i):
        return {"t": float(self.t[i]), "b": self.b[i].tolist(), "y": float(self.y[i]), "z": self.z[i].tolist()}


@dataclass
class PairSet:
    """Pairs sharing (t, b); the second point is (y2, z2)"""

    t: np.ndarray
    b: np.ndarray
    y1: np.ndarray
    z1: np.ndarray
    y2: np.ndarray
    z2: np.ndarray

    def __len__(self):
        return len(self.t)

    def pair(self, i):
        return {
            "t": float(self.t[i]), "b": self.b[i].tolist(),
            "y1": float(self.y1[i]), "z1": self.z1[i].tolist(),
            "y2": float(self.y2[i]), "z2": self.z2[i].tolist(),
        }


def sample_points(d, count, seed, T=1.0, scale=2.0):
    """
    Random query points

    Args:
        d: Brownian dimension
        count: Number of points
        seed: numpy Generator seed
        T: Horizon; t is uniform on (0, T], b ~ N(0, t)
        scale: Standard deviation of y and z

    Returns:
        PointSet
    """
    rng = np.random.default_rng(seed)
    t = T * (1.0 - rng.random(count))
    b = rng.standard_normal((count, d)) * np.sqrt(t)[:, None]
    y = scale * rng.standard_normal(count)
    z = scale * rng.standard_normal((count, d))
    return PointSet(t=t, b=b, y=y, z=z)


def sample_pairs(d, count, seed, T=1.0, scale=2.0, same_y=False):
    """
    Random pairs for modulus checks; half of them are close pairs

    Args:
        same_y: Keep y2 = y1 (Z-kind certificates vary z only)
    """
    rng = np.random.default_rng(seed)
    first = sample_points(d, count, rng.integers(2 ** 63), T=T, scale=scale)
    near = rng.random(count) < 0.5
    step = np.where(near, 1e-3, scale)
    y2 = first.y if same_y else first.y + step * rng.standard_normal(count)
    z2 = first.z + step[:, None] * rng.standard_normal((count, d))
    return PairSet(t=first.t, b=first.b, y1=first.y, z1=first.z, y2=np.array(y2), z2=z2)


def _excess(gap, tol):
    return np.maximum(gap - tol, 0.0)


@dataclass
class SequenceReport:
    """
    Attributes:
        kind: Envelope kind
        n_list: Indices evaluated
        values: Envelope values, shape (len(n_list), P)
        gaps: Certified gaps, same shape
        base: g at the points, shape (P,)
        mean_abs_error: mean |g_n - g| per n
        ordering_violations: Witnesses of a monotonicity failure in n
        sandwich_violations: Witnesses of a growth-bound or g-ordering failure
        worst_ordering_slack: Largest allowance minus violation (negative on failure)
    """

    kind: EnvelopeKind
    n_list: list
    values: np.ndarray
    gaps: np.ndarray
    base: np.ndarray
    mean_abs_error: list
    ordering_violations: list = field(default_factory=list)
    sandwich_violations: list = field(default_factory=list)
    worst_ordering_slack: float = float("inf")
    uncertified: int = 0

    @property
    def passed(self):
        return not self.ordering_violations and not self.sandwich_violations

    def table(self):
        """Rows (n, mean value, mean |g_n - g|, max gap) for CSV emission"""
        return [
            {
                "n": n,
                "mean_value": float(np.mean(self.values[j])),
                "mean_abs_error": self.mean_abs_error[j],
                "max_gap": float(np.max(self.gaps[j], initial=0.0)),
            }
            for j, n in enumerate(self.n_list)
        ]


def envelope_sequence(g, n_list, points, kind=EnvelopeKind.INF_Z, tol=DEFAULT_ENVELOPE_TOL, workers=None,
                      max_witnesses=10):
    """
    Evaluate envelopes for increasing n and check their order properties

    INF kinds must be nondecreasing in n and stay below g; SUP kinds must be
    nonincreasing and stay above g. Both must respect the growth sandwich
    of the claimed (H4) or (H5) bound. Every comparison allows 2 tol plus
    any excess of an uncertified gap.

    Args:
        g: GeneratorSpec
        n_list: Strictly increasing positive integers
        points: PointSet
        kind: EnvelopeKind or its name
        tol: Optimizer tolerance
        workers: Thread count
        max_witnesses: Witnesses kept per violation type

    Returns:
        SequenceReport (violations are report states, never exceptions)
    """
    kind = EnvelopeKind.parse(kind)
    n_list = [int(n) for n in n_list]
    if not n_list or any(a >= b for a, b in zip(n_list, n_list[1:])):
        raise InvalidArgumentError(f"n_list must be strictly increasing, got {n_list}")

    batches = [envelope_batch(g, n, kind, points.t, points.b, points.y, points.z, tol=tol, workers=workers)
               for n in n_list]
    values = np.stack([batch.value for batch in batches])
    gaps = np.stack([batch.certified_gap for batch in batches])
    base = g.eval(points.t, points.b, points.y, points.z)
    direction = -1.0 if kind.sup else 1.0

    report = SequenceReport(
        kind=kind, n_list=n_list, values=values, gaps=gaps, base=base,
        mean_abs_error=[float(np.mean(np.abs(v - base))) for v in values],
        uncertified=int(sum(np.count_nonzero(~batch.certified) for batch in batches)),
    )

    # Monotone in n
    worst = float("inf")
    for j in range(len(n_list) - 1):
        allowance = 2 * tol + _excess(gaps[j], tol) + _excess(gaps[j + 1], tol)
        drop = direction * (values[j] - values[j + 1])
        slack = allowance - drop
        worst = min(worst, float(np.min(slack, initial=np.inf)))
        for i in np.flatnonzero(slack < 0)[:max_witnesses]:
            report.ordering_violations.append({
                "n": n_list[j], "next_n": n_list[j + 1], "point": points.point(i),
                "value": float(values[j, i]), "next_value": float(values[j + 1, i]),
            })
    report.worst_ordering_slack = worst

    # Sandwich
    constant, alpha, f_process = penalty_constants(g, kind)
    f_t = f_process(points.t, points.b)
    if kind.joint:
        centre = np.zeros_like(base)
        reach = f_t + constant * (np.abs(points.y) + norm(points.z) ** alpha)
    else:
        centre = g.eval(points.t, points.b, points.y, np.zeros_like(points.z))
        reach = constant * (f_t + np.abs(points.y) + norm(points.z) ** alpha)
    for j, n in enumerate(n_list):
        allowance = tol + _excess(gaps[j], tol)
        low = values[j] < centre - reach - allowance
        high = values[j] > centre + reach + allowance
        beyond_g = direction * (values[j] - base) > allowance
        for i in np.flatnonzero(low | high | beyond_g)[:max_witnesses]:
            report.sandwich_violations.append({
                "n": n, "point": points.point(i), "value": float(values[j, i]), "g": float(base[i]),
                "lower": float(centre[i] - reach[i]), "upper": float(centre[i] + reach[i]),
            })

    logger.info(f"{g.label} {kind.value} sequence n={n_list}: "
                f"{len(report.ordering_violations)} ordering, {len(report.sandwich_violations)} sandwich violations")
    return report


@dataclass
class ModulusReport:
    kind: EnvelopeKind
    n: int
    pair_count: int
    worst_slack: float
    witness: dict = None
    empirical_constant: float = 0.0

    @property
    def passed(self):
        return self.worst_slack >= 0.0


def holder_modulus_check(g, n, kind, pairs, tol=DEFAULT_ENVELOPE_TOL, workers=None):
    """
    Check the Hoelder certificate of the n-th envelope on sampled pairs

    Z kinds:     |g_n(z1) - g_n(z2)| <= (n + lam)|z1 - z2|^alpha + 2 tol
    joint kinds: |g_n(y1, z1) - g_n(y2, z2)| <= n C (|y1 - y2| + |z1 - z2|^alpha) + 2 tol

    For Z kinds y2 is ignored and y1 is used on both sides.

    Returns:
        ModulusReport; empirical_constant is the smallest weight that passes
        on the pairs
    """
    kind = EnvelopeKind.parse(kind)
    _, alpha, _ = penalty_constants(g, kind)
    weight = penalty_weight(g, n, kind)
    y2 = pairs.y2 if kind.joint else pairs.y1

    first = envelope_batch(g, n, kind, pairs.t, pairs.b, pairs.y1, pairs.z1, tol=tol, workers=workers)
    second = envelope_batch(g, n, kind, pairs.t, pairs.b, y2, pairs.z2, tol=tol, workers=workers)

    distance = norm(pairs.z1 - pairs.z2) ** alpha
    if kind.joint:
        distance = distance + np.abs(pairs.y1 - y2)
    difference = np.abs(first.value - second.value)
    allowance = 2 * tol + _excess(first.certified_gap, tol) + _excess(second.certified_gap, tol)
    slack = weight * distance + allowance - difference

    report = ModulusReport(kind=kind, n=int(n), pair_count=len(pairs), worst_slack=float(np.min(slack, initial=np.inf)))
    if len(pairs):
        worst = int(np.argmin(slack))
        report.witness = dict(pairs.pair(worst), difference=float(difference[worst]), bound=float(weight * distance[worst]))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(distance > 0, np.maximum(difference - 2 * tol, 0.0) / distance, 0.0)
        report.empirical_constant = float(np.max(ratios))
    logger.debug(f"{g.label} {kind.value} n={n}: modulus worst slack {report.worst_slack:.3e}")
    return report


@dataclass
class TrajectoryReport:
    kind: EnvelopeKind
    n_list: list
    errors: list
    tol: float

    @property
    def passed(self):
        return self.errors[-1] < self.errors[0] or self.errors[-1] <= 2 * self.tol


def convergence_along_trajectory(g, kind, point, n_list, tol=DEFAULT_ENVELOPE_TOL, direction=None):
    """
    |g_n(y_n, z_n) - g(y, z)| along (y_n, z_n) -> (y, z)

    The trajectory is y_n = y - 1/n (approach from the left in y, used for
    the joint kinds) and z_n = z + direction/n.

    Args:
        g: GeneratorSpec
        kind: EnvelopeKind or its name
        point: Mapping with t, b, y, z
        n_list: Increasing indices
        tol: Optimizer tolerance
        direction: Unit vector for the z approach (defaults to e_1)

    Returns:
        TrajectoryReport
    """
    kind = EnvelopeKind.parse(kind)
    t = float(point["t"])
    b = np.asarray(point["b"], dtype=float)
    y = float(point["y"])
    z = np.asarray(point["z"], dtype=float)
    if direction is None:
        direction = np.eye(g.d)[0]
    direction = np.asarray(direction, dtype=float)

    target = float(g.eval(t, b, y, z))
    errors = []
    for n in n_list:
        y_n = y - 1.0 / n
        z_n = z + direction / n
        value = envelope_batch(g, n, kind, np.array([t]), b[None, :], np.array([y_n]), z_n[None, :],
                               tol=tol, workers=1).value[0]
        errors.append(float(abs(value - target)))
    return TrajectoryReport(kind=kind, n_list=[int(n) for n in n_list], errors=errors, tol=tol)
