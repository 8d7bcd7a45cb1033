"""
Lattice checks of the assumption classes a generator can claim

Every check is a semi-decision: a failing report carries a reproducible
witness, a passing one only says that no violation was found on the
lattice. Inequalities lhs <= rhs are tested with the slack

    rhs - lhs + CHECK_ATOL + CHECK_RTOL (|lhs| + |rhs| + scale)

where scale is the size of the generator values whose difference forms
lhs. Points where g is not finite are skipped and counted.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .lattice import PointGrid, make_lattice
from .moduli import concave_nondecreasing, linear_growth, osgood_divergent
from ..config.numerics_config import (
    CHECK_ATOL,
    CHECK_RTOL,
    H3_PATHS,
    H3_RADII,
    H3_STEPS,
    H3_Y_POINTS,
    PROBE_ATOL,
    PROBE_DEPTH,
    PROBE_MAX_MAGNITUDE,
    PROBE_TAIL,
)
from ..errors import ContractError, InvalidArgumentError
from ..generators.spec import norm, zero_process
from ..generators.truncation import remark1_bound
from ..stochastic import brownian_matrix, make_grid, simulate_paths
from ..utils.logging import get_logger

logger = get_logger(__name__)

PASS_VERDICT = "no violation found on lattice"
FAIL_VERDICT = "refuted"


@dataclass
class CheckReport:
    """
    Outcome of one assumption check

    Attributes:
        assumption: Assumption id (e.g. "H2") or check name
        generator: Generator label
        passed: No violation found
        worst_slack: Smallest slack over evaluated points (negative on failure)
        witness: Point (and values) where the slack is smallest
        empirical_constant: Smallest constant that passes on the lattice, when
            the assumption has one
        evaluated: Points or pairs evaluated
        skipped: Points skipped because g was not finite
        seed: Lattice seed
        note: Extra detail
    """

    assumption: str
    generator: str
    passed: bool
    worst_slack: float
    witness: dict = None
    empirical_constant: float = None
    evaluated: int = 0
    skipped: int = 0
    seed: int = None
    note: str = ""
    details: list = field(default_factory=list)

    @property
    def verdict(self):
        return PASS_VERDICT if self.passed else FAIL_VERDICT

    def summary(self):
        return {
            "assumption": self.assumption,
            "generator": self.generator,
            "verdict": self.verdict,
            "passed": self.passed,
            "worst_slack": self.worst_slack,
            "witness": self.witness,
            "empirical_constant": self.empirical_constant,
            "evaluated": self.evaluated,
            "skipped": self.skipped,
            "seed": self.seed,
            "note": self.note,
            "details": [detail.summary() for detail in self.details],
        }


def _inequality_slack(lhs, rhs, scale=0.0):
    return rhs - lhs + CHECK_ATOL + CHECK_RTOL * (np.abs(lhs) + np.abs(rhs) + scale)


def _report(assumption, g, lattice, slack, witness, empirical=None, note=""):
    """
    Build a report from a slack array

    Args:
        witness: Callable index -> dict describing the point
    """
    slack = np.asarray(slack, dtype=float).ravel()
    finite = np.isfinite(slack)
    evaluated = int(np.count_nonzero(finite))
    report = CheckReport(
        assumption=assumption, generator=g.label, passed=True, worst_slack=float("inf"),
        empirical_constant=empirical, evaluated=evaluated, skipped=int(slack.size - evaluated),
        seed=lattice.seed, note=note,
    )
    if evaluated:
        candidates = np.where(finite, slack, np.inf)
        worst = int(np.argmin(candidates))
        report.worst_slack = float(candidates[worst])
        report.passed = report.worst_slack >= 0.0
        report.witness = witness(worst)
    else:
        report.note = (note + "; " if note else "") + "no finite evaluations"
    logger.debug(f"{g.label} {assumption}: {report.verdict} (worst slack {report.worst_slack:.3e}, "
                 f"{report.skipped} skipped)")
    return report


def _combine(assumption, g, lattice, reports, note=""):
    """Merge sub-reports; the worst sub-report supplies the slack and witness"""
    worst = min(reports, key=lambda r: r.worst_slack)
    return CheckReport(
        assumption=assumption, generator=g.label,
        passed=all(r.passed for r in reports),
        worst_slack=worst.worst_slack,
        witness=dict(worst.witness or {}, part=worst.assumption) if worst.witness is not None else None,
        empirical_constant=None,
        evaluated=sum(r.evaluated for r in reports),
        skipped=sum(r.skipped for r in reports),
        seed=lattice.seed,
        note=note,
        details=list(reports),
    )


def _max_ratio(numerator, denominator):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denominator > 0, numerator / denominator, 0.0)
    ratio = ratio[np.isfinite(ratio)]
    return float(max(np.max(ratio, initial=0.0), 0.0))


def _declared(g, name, value=None):
    value = getattr(g.params, name) if value is None else value
    if value is None:
        raise ContractError(f"{g.label} declares no {name}")
    return value


def _lattice(g, lattice):
    return lattice if lattice is not None else make_lattice(d=g.d)


# Monotonicity in y

def check_H2(g, lattice=None, mu=None):
    """(g(y1, z) - g(y2, z))(y1 - y2) <= mu |y1 - y2|^2 on random pairs"""
    lattice = _lattice(g, lattice)
    mu = float(_declared(g, "mu", mu))
    pairs = lattice.pairs(same_z=True)
    g1 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z1)
    g2 = g.eval(pairs.t, pairs.b, pairs.y2, pairs.z1)
    dy = pairs.y1 - pairs.y2
    lhs = (g1 - g2) * dy
    rhs = mu * dy ** 2
    slack = _inequality_slack(lhs, rhs, (np.abs(g1) + np.abs(g2)) * np.abs(dy))

    def witness(i):
        return dict(pairs.pair(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report("H2", g, lattice, slack, witness, empirical=_max_ratio(lhs, dy ** 2), note=f"mu={mu:g}")


def check_H2prime(g, lattice=None, rho=None):
    """(g(y1, z) - g(y2, z)) sgn(y1 - y2) <= rho(|y1 - y2|) on random pairs"""
    lattice = _lattice(g, lattice)
    rho = _declared(g, "rho", rho)
    pairs = lattice.pairs(same_z=True)
    g1 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z1)
    g2 = g.eval(pairs.t, pairs.b, pairs.y2, pairs.z1)
    dy = pairs.y1 - pairs.y2
    lhs = (g1 - g2) * np.sign(dy)
    rhs = np.asarray(rho(np.abs(dy)), dtype=float)
    slack = _inequality_slack(lhs, rhs, np.abs(g1) + np.abs(g2))

    def witness(i):
        return dict(pairs.pair(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report("H2'", g, lattice, slack, witness)


def check_H4star(g, lattice=None, phi=None):
    """|g(y, z1) - g(y, z2)| <= phi(|z1 - z2|) on random pairs"""
    lattice = _lattice(g, lattice)
    phi = _declared(g, "phi", phi)
    pairs = lattice.pairs(same_y=True)
    g1 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z1)
    g2 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z2)
    lhs = np.abs(g1 - g2)
    rhs = np.asarray(phi(norm(pairs.z1 - pairs.z2)), dtype=float)
    slack = _inequality_slack(lhs, rhs, np.abs(g1) + np.abs(g2))

    def witness(i):
        return dict(pairs.pair(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report("H4*", g, lattice, slack, witness)


def check_H2prime_H4star(g, lattice=None):
    """
    (H2') and (H4*) on pairs, plus the shape of the declared moduli

    rho must be nondecreasing, concave, zero only at 0 and have a divergent
    integral of 1/rho at 0+; phi must vanish at 0, be nondecreasing and grow
    at most linearly.
    """
    lattice = _lattice(g, lattice)
    rho = _declared(g, "rho")
    phi = _declared(g, "phi")
    reports = [check_H2prime(g, lattice, rho), check_H4star(g, lattice, phi)]

    shape_ok, shape_issue = concave_nondecreasing(rho)
    divergent, partial = osgood_divergent(rho)
    growth_ok, growth_issue = linear_growth(phi)
    notes = []
    for ok, name, issue in ((shape_ok, "rho shape", shape_issue), (divergent, "rho Osgood", "integral of 1/rho converges"),
                            (growth_ok, "phi growth", growth_issue)):
        reports.append(CheckReport(
            assumption=name, generator=g.label, passed=bool(ok),
            worst_slack=0.0 if ok else -1.0,
            witness=None if ok else {"issue": issue},
            seed=lattice.seed, evaluated=1,
        ))
        if not ok:
            notes.append(f"{name}: {issue}")
    report = _combine("H2'+H4*", g, lattice, reports, note="; ".join(notes))
    report.empirical_constant = float(partial[-1]) if np.isfinite(partial[-1]) else None
    return report


# Growth and regularity in z

def check_H4_family(g, lattice=None, variant="H4", lam=None, alpha=None, f_process=None, gamma=None):
    """
    One of the growth or Hoelder conditions in z

        H4:   |g(y, z) - g(y, 0)| <= lam (f + |y| + |z|^alpha)
        H4':  |g(y, z) - g(y, 0)| <= lam (f + |y| + |z|)^alpha
        H4'': |g(y, z1) - g(y, z2)| <= gamma |z1 - z2|^alpha   (pairs)

    Constants default to the declared ones.
    """
    lattice = _lattice(g, lattice)
    alpha = float(_declared(g, "alpha", alpha))

    if variant == "H4''":
        gamma = float(_declared(g, "gamma", gamma))
        pairs = lattice.pairs(same_y=True)
        g1 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z1)
        g2 = g.eval(pairs.t, pairs.b, pairs.y1, pairs.z2)
        lhs = np.abs(g1 - g2)
        unit = norm(pairs.z1 - pairs.z2) ** alpha
        rhs = gamma * unit
        slack = _inequality_slack(lhs, rhs, np.abs(g1) + np.abs(g2))

        def witness(i):
            return dict(pairs.pair(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

        return _report(variant, g, lattice, slack, witness, empirical=_max_ratio(lhs, unit),
                       note=f"gamma={gamma:g} alpha={alpha:g}")

    if variant not in ("H4", "H4'"):
        raise InvalidArgumentError(f"Unknown H4 variant: {variant}. Available: ['H4', \"H4'\", \"H4''\"]")
    lam = float(_declared(g, "lam", lam))
    f_process = f_process or g.params.f_process

    grid = lattice.grid()
    value = g.eval(grid.t, grid.b, grid.y, grid.z)
    origin = g.eval(grid.t, grid.b, grid.y, np.zeros_like(grid.z))
    f_t = np.asarray(f_process(grid.t, grid.b), dtype=float)
    lhs = np.abs(value - origin)
    if variant == "H4":
        unit = f_t + np.abs(grid.y) + norm(grid.z) ** alpha
    else:
        unit = (f_t + np.abs(grid.y) + norm(grid.z)) ** alpha
    rhs = lam * unit
    slack = _inequality_slack(lhs, rhs, np.abs(value) + np.abs(origin))

    def witness(i):
        return dict(grid.point(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report(variant, g, lattice, slack, witness, empirical=_max_ratio(lhs, unit),
                   note=f"lambda={lam:g} alpha={alpha:g}")


def check_H5(g, lattice=None, C=None, alpha=None, f_process=None):
    """|g(y, z)| <= f + C (|y| + |z|^alpha) on the grid"""
    lattice = _lattice(g, lattice)
    C = float(_declared(g, "C", C))
    alpha = float(_declared(g, "alpha", alpha))
    f_process = f_process or g.params.f_process

    grid = lattice.grid()
    value = g.eval(grid.t, grid.b, grid.y, grid.z)
    f_t = np.asarray(f_process(grid.t, grid.b), dtype=float)
    unit = np.abs(grid.y) + norm(grid.z) ** alpha
    lhs = np.abs(value)
    rhs = f_t + C * unit
    slack = _inequality_slack(lhs, rhs)

    def witness(i):
        return dict(grid.point(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report("H5", g, lattice, slack, witness, empirical=_max_ratio(lhs - f_t, unit),
                   note=f"C={C:g} alpha={alpha:g}")


# Continuity probes

def _probe_base(lattice):
    grid = lattice.grid()
    small = (np.abs(grid.y) <= PROBE_MAX_MAGNITUDE) & (norm(grid.z) <= PROBE_MAX_MAGNITUDE)
    return grid.subset(small)


def _probe_steps():
    return 2.0 ** -np.arange(1, PROBE_DEPTH + 1)


def _approach(g, base, y_sign, z_sign, direction):
    """g at the base points and along (y + y_sign 2^-j, z + z_sign 2^-j e), shapes (P,), (P, J)"""
    steps = _probe_steps()
    value = g.eval(base.t, base.b, base.y, base.z)
    probes = g.eval(
        base.t[:, None], base.b[:, None, :],
        base.y[:, None] + y_sign * steps[None, :],
        base.z[:, None, :] + z_sign * steps[None, :, None] * direction[None, None, :],
    )
    return value, probes


def _limit_slack(value, probes, scale=None):
    """
    Slack of lim probes = value: the last probe gap is within tolerance and
    the gaps do not grow over the tail of the sequence
    """
    scale = np.abs(value) if scale is None else scale
    allowance = PROBE_ATOL * (1.0 + scale)
    gaps = np.abs(probes - value[:, None])[:, -PROBE_TAIL:]
    rise = np.max(np.diff(gaps, axis=1), axis=1, initial=0.0)
    return np.minimum(allowance - gaps[:, -1], allowance - rise)


def _one_sided_slack(value, probes, lower=True):
    """Slack of liminf probes >= value (lower) or limsup probes <= value"""
    allowance = PROBE_ATOL * (1.0 + np.abs(value))
    change = probes[:, -1] - value
    return allowance + change if lower else allowance - change


def _part_reports(assumption, g, lattice, base, parts):
    """One report per (name, slack over base points) part"""
    reports = []
    for name, slack in parts:
        def witness(i, name=name):
            return dict(base.point(i), approach=name)
        reports.append(_report(f"{assumption}:{name}", g, lattice, slack, witness))
    return reports


def _joint_continuity_parts(g, lattice, base):
    parts = []
    for y_sign, z_sign, name in ((-1.0, 1.0, "left"), (-1.0, -1.0, "left-"), (1.0, 1.0, "right"), (1.0, -1.0, "right-")):
        value, probes = _approach(g, base, y_sign, z_sign, lattice.direction)
        parts.append((name, _limit_slack(value, probes)))
    return parts


def _uniform_parts(g, lattice):
    """
    sup_z |g(y0 + s 2^-j, z) - g(y0, z)| along the halving sequence for every
    (t, b, y0) with |y0| <= PROBE_MAX_MAGNITUDE, z ranging over the lattice
    """
    it, ib, iy = np.meshgrid(np.arange(len(lattice.t)), np.arange(len(lattice.b)),
                             np.flatnonzero(np.abs(lattice.y) <= PROBE_MAX_MAGNITUDE), indexing="ij")
    it, ib, iy = it.ravel(), ib.ravel(), iy.ravel()
    base = PointGrid(t=lattice.t[it], b=lattice.b[ib], y=lattice.y[iy], z=np.zeros((len(it), g.d)))

    t = base.t[:, None]
    b = base.b[:, None, :]
    y0 = base.y[:, None]
    z = lattice.z[None, :, :]
    value = g.eval(t, b, y0, z)
    scale = np.max(np.abs(value), axis=1)
    parts = []
    for sign, name in ((-1.0, "uniform-left"), (1.0, "uniform-right")):
        gaps = np.stack([
            np.max(np.abs(g.eval(t, b, y0 + sign * step, z) - value), axis=1)
            for step in _probe_steps()[-PROBE_TAIL:]
        ], axis=1)
        parts.append((name, _limit_slack(np.zeros(len(base)), gaps, scale=scale)))
    return base, parts


def check_H1prime(g, lattice=None):
    """Continuity in (y, z) probed with halving sequences from four directions"""
    lattice = _lattice(g, lattice)
    base = _probe_base(lattice)
    return _combine("H1'", g, lattice, _part_reports("H1'", g, lattice, base, _joint_continuity_parts(g, lattice, base)))


def check_H1(g, lattice=None):
    """Continuity in (y, z) plus continuity in y uniformly over the lattice z"""
    lattice = _lattice(g, lattice)
    base = _probe_base(lattice)
    reports = _part_reports("H1", g, lattice, base, _joint_continuity_parts(g, lattice, base))
    uniform_base, uniform_parts = _uniform_parts(g, lattice)
    reports += _part_reports("H1", g, lattice, uniform_base, uniform_parts)
    return _combine("H1", g, lattice, reports, note="uniformity in z checked on lattice z only")


def _semicontinuity_parts(g, lattice, base, left_limit):
    """Limit parts from the continuity side and liminf/limsup parts from the other side"""
    limit_sign, other_sign = (-1.0, 1.0) if left_limit else (1.0, -1.0)
    parts = []
    for z_sign, suffix in ((1.0, ""), (-1.0, "-")):
        value, probes = _approach(g, base, limit_sign, z_sign, lattice.direction)
        parts.append((("left" if left_limit else "right") + suffix, _limit_slack(value, probes)))
        value, probes = _approach(g, base, other_sign, z_sign, lattice.direction)
        name = ("liminf-right" if left_limit else "limsup-left") + suffix
        parts.append((name, _one_sided_slack(value, probes, lower=left_limit)))
    return parts


def check_H1a(g, lattice=None):
    """Left-continuity in y (jointly with z) and lower semicontinuity from the right"""
    lattice = _lattice(g, lattice)
    base = _probe_base(lattice)
    parts = _semicontinuity_parts(g, lattice, base, left_limit=True)
    return _combine("H1a", g, lattice, _part_reports("H1a", g, lattice, base, parts))


def check_H1b(g, lattice=None):
    """Right-continuity in y (jointly with z) and upper semicontinuity from the left"""
    lattice = _lattice(g, lattice)
    base = _probe_base(lattice)
    parts = _semicontinuity_parts(g, lattice, base, left_limit=False)
    return _combine("H1b", g, lattice, _part_reports("H1b", g, lattice, base, parts))


def check_H5_and_H1a(g, lattice=None):
    """(H5) growth and (H1a) one-sided limits as one report"""
    lattice = _lattice(g, lattice)
    return _combine("H5+H1a", g, lattice, [check_H5(g, lattice), check_H1a(g, lattice)])


# General growth in y

def check_H3(g, lattice=None, radii=H3_RADII, paths=H3_PATHS, steps=H3_STEPS, y_points=H3_Y_POINTS):
    """
    Integrability of phi_r(t) = sup_{|y| <= r} |g(t, B_t, y, 0)| along sampled paths

    B is interpolated linearly between the nodes of simulated paths and the
    integral over [0, T] is computed with adaptive quadrature, declared
    singular times passed as break points. Passes iff every integral is finite;
    the reported slack is 1 / (1 + largest integral).
    """
    lattice = _lattice(g, lattice)
    T = lattice.T
    grid = make_grid(T, steps)
    bundle = simulate_paths(grid, g.d, paths, lattice.seed, workers=1)
    nodes = brownian_matrix(bundle)
    breaks = [s for s in g.singular_times if 0.0 < s < T] or None
    zero_z = np.zeros(g.d)

    integrals = []
    witnesses = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for r in radii:
            ys = np.linspace(-r, r, y_points)
            for m in range(paths):
                def integrand(s, m=m, ys=ys):
                    b = np.array([np.interp(s, grid.nodes, nodes[m, :, k]) for k in range(g.d)])
                    values = g.eval(s, b[None, :], ys, zero_z[None, :])
                    return float(np.max(np.abs(values)))

                value, error = integrate.quad(integrand, 0.0, T, points=breaks, limit=200)
                integrals.append(value if np.isfinite(error) else np.inf)
                witnesses.append({"r": float(r), "path": m, "integral": float(value), "error": float(error)})

    integrals = np.array(integrals)
    finite = np.isfinite(integrals)
    # Largest integral gives the smallest positive slack
    slack = np.where(finite, 1.0 / (1.0 + np.abs(np.where(finite, integrals, 0.0))), -1.0)
    return _report("H3", g, lattice, slack, lambda i: witnesses[i],
                   empirical=float(np.max(integrals[finite], initial=0.0)),
                   note=f"radii={list(radii)} paths={paths}")


# Derived statements

def check_implications(g, lattice=None):
    """
    Check the constants derived along H4'' => H4' => H4

        H4'' (gamma, alpha)  gives H4' and H4 with lam = gamma, f = 0
        H4'  (lam, alpha, f) gives H4 with lam and f + 1

    Derived statements are only tested when their premise passes.
    """
    lattice = _lattice(g, lattice)
    reports = []
    notes = []

    if g.has("H4''"):
        premise = check_H4_family(g, lattice, "H4''")
        notes.append(f"H4'' {premise.verdict}")
        if premise.passed:
            gamma = g.params.gamma
            reports.append(check_H4_family(g, lattice, "H4'", lam=gamma, f_process=zero_process))
            reports.append(check_H4_family(g, lattice, "H4", lam=gamma, f_process=zero_process))
    if g.has("H4'"):
        premise = check_H4_family(g, lattice, "H4'")
        notes.append(f"H4' {premise.verdict}")
        if premise.passed:
            base_f = g.params.f_process
            reports.append(check_H4_family(g, lattice, "H4", f_process=lambda t, b: base_f(t, b) + 1.0))

    if not reports:
        return CheckReport(assumption="implications", generator=g.label, passed=True, worst_slack=float("inf"),
                           seed=lattice.seed, note="; ".join(notes) or "no passing H4'' or H4' premise")
    return _combine("implications", g, lattice, reports, note="; ".join(notes))


def check_remark1(g, lattice=None):
    """g sgn(y) <= |g(t, b, 0, 0)| + lam f + (lam + mu)|y| + lam |z| on the grid"""
    lattice = _lattice(g, lattice)
    grid = lattice.grid()
    lhs, rhs = remark1_bound(g, grid.t, grid.b, grid.y, grid.z)
    slack = _inequality_slack(lhs, rhs)

    def witness(i):
        return dict(grid.point(i), lhs=float(lhs[i]), rhs=float(rhs[i]))

    return _report("remark1", g, lattice, slack, witness)


def check_dominance(g, g_prime, lattice=None):
    """g <= g' at every grid point"""
    lattice = _lattice(g, lattice)
    grid = lattice.grid()
    lhs = g.eval(grid.t, grid.b, grid.y, grid.z)
    rhs = g_prime.eval(grid.t, grid.b, grid.y, grid.z)
    slack = _inequality_slack(lhs, rhs)

    def witness(i):
        return dict(grid.point(i), g=float(lhs[i]), g_prime=float(rhs[i]))

    report = _report("dominance", g, lattice, slack, witness, note=f"{g.label} <= {g_prime.label}")
    return report


CHECKS = {
    "H1": check_H1,
    "H1'": check_H1prime,
    "H1a": check_H1a,
    "H1b": check_H1b,
    "H2": check_H2,
    "H2'": check_H2prime,
    "H3": check_H3,
    "H4": lambda g, lattice: check_H4_family(g, lattice, "H4"),
    "H4'": lambda g, lattice: check_H4_family(g, lattice, "H4'"),
    "H4''": lambda g, lattice: check_H4_family(g, lattice, "H4''"),
    "H4*": check_H4star,
    "H5": check_H5,
    "H2'+H4*": check_H2prime_H4star,
    "H5+H1a": check_H5_and_H1a,
    "implications": check_implications,
    "remark1": check_remark1,
}


def run_checks(g, ids=None, lattice=None):
    """
    Run several checks on one lattice

    Args:
        g: GeneratorSpec
        ids: Check ids (defaults to every flag g claims, in sorted order)
        lattice: Lattice (defaults to make_lattice(d=g.d))

    Returns:
        List of CheckReport in the order of ids
    """
    lattice = _lattice(g, lattice)
    ids = sorted(g.params.flags) if ids is None else list(ids)
    unknown = [i for i in ids if i not in CHECKS]
    if unknown:
        raise InvalidArgumentError(f"Unknown checks: {unknown}. Available: {list(CHECKS.keys())}")
    reports = []
    for check_id in ids:
        report = CHECKS[check_id](g, lattice)
        logger.info(f"{g.label} {check_id}: {report.verdict}")
        reports.append(report)
    return reports
