"""
Deterministic sampling lattice for assumption checks
"""

from dataclasses import dataclass

import numpy as np

from ..config.numerics_config import (
    LATTICE_B_COUNT,
    LATTICE_MAGNITUDE_EXPONENTS,
    LATTICE_PAIR_COUNT,
    LATTICE_T_COUNT,
    LATTICE_T_MIN_FRACTION,
)
from ..errors import InvalidArgumentError


def signed_magnitudes(exponents):
    """Sorted values 0 and +-10^k for k in exponents"""
    positive = [10.0 ** k for k in exponents]
    return np.array(sorted([-v for v in positive] + [0.0] + positive))


@dataclass
class PointGrid:
    """Flattened product of lattice samples; t, y shape (P,), b, z shape (P, d)"""

    t: np.ndarray
    b: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __len__(self):
        return len(self.t)

    def point(self, i):
        return {"t": float(self.t[i]), "b": self.b[i].tolist(), "y": float(self.y[i]), "z": self.z[i].tolist()}

    def subset(self, mask):
        return PointGrid(t=self.t[mask], b=self.b[mask], y=self.y[mask], z=self.z[mask])


@dataclass
class PairSample:
    """Pairs sharing (t, b) with first point (y1, z1) and second point (y2, z2)"""

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


@dataclass
class Lattice:
    """
    Samples of (t, b, y, z) reproducible from a seed

    Attributes:
        T: Horizon
        d: Brownian dimension
        seed: Seed of every random component
        t: Times, log-spaced in (T_min, T]
        b: Brownian states drawn from N(0, T I_d), shape (B, d)
        y: Signed magnitudes
        z: z samples, shape (Z, d): magnitudes along e_1 and, for d > 1,
            along one random unit direction
        pair_count: Number of random pairs
        direction: Unit vector used by one-sided probes in z
    """

    T: float
    d: int
    seed: int
    t: np.ndarray
    b: np.ndarray
    y: np.ndarray
    z: np.ndarray
    pair_count: int
    direction: np.ndarray

    def grid(self):
        """Full product t x b x y x z, flattened"""
        it, ib, iy, iz = np.meshgrid(
            np.arange(len(self.t)), np.arange(len(self.b)), np.arange(len(self.y)), np.arange(len(self.z)),
            indexing="ij",
        )
        it, ib, iy, iz = (index.ravel() for index in (it, ib, iy, iz))
        return PointGrid(t=self.t[it], b=self.b[ib], y=self.y[iy], z=self.z[iz])

    def pairs(self, same_y=False, same_z=False):
        """
        Random pairs drawn from the lattice samples

        Half of the pairs are close: the second point sits 2^-k away (k uniform
        in 1..30) from the first.

        Args:
            same_y: Keep y2 = y1
            same_z: Keep z2 = z1
        """
        rng = np.random.default_rng([self.seed, 1])
        K = self.pair_count
        it = rng.integers(len(self.t), size=K)
        ib = rng.integers(len(self.b), size=K)
        y1 = self.y[rng.integers(len(self.y), size=K)]
        z1 = self.z[rng.integers(len(self.z), size=K)]
        close = rng.random(K) < 0.5
        offset = 2.0 ** -rng.integers(1, 31, size=K)
        sign = np.where(rng.random(K) < 0.5, -1.0, 1.0)
        y2 = np.where(close, y1 + sign * offset, self.y[rng.integers(len(self.y), size=K)])
        unit = rng.standard_normal((K, self.d))
        unit /= np.linalg.norm(unit, axis=1, keepdims=True)
        z2 = np.where(close[:, None], z1 + offset[:, None] * unit, self.z[rng.integers(len(self.z), size=K)])
        if same_y:
            y2 = y1.copy()
        if same_z:
            z2 = z1.copy()
        return PairSample(t=self.t[it], b=self.b[ib], y1=y1, z1=z1, y2=y2, z2=z2)

    def describe(self):
        return {
            "T": self.T,
            "d": self.d,
            "seed": self.seed,
            "t_count": len(self.t),
            "b_count": len(self.b),
            "y_values": self.y.tolist(),
            "z_count": len(self.z),
            "pair_count": self.pair_count,
        }


def make_lattice(d=1, T=1.0, seed=0, t_count=LATTICE_T_COUNT, b_count=LATTICE_B_COUNT,
                 exponents=LATTICE_MAGNITUDE_EXPONENTS, pair_count=LATTICE_PAIR_COUNT):
    """
    Build the default lattice

    Args:
        d: Brownian dimension
        T: Horizon
        seed: Seed for b samples, z direction and pairs
        t_count: Log-spaced times in (LATTICE_T_MIN_FRACTION * T, T]
        b_count: Brownian states
        exponents: Decimal exponents of the y and z magnitudes
        pair_count: Random pairs

    Returns:
        Lattice
    """
    if d < 1 or T <= 0 or t_count < 1 or b_count < 1 or pair_count < 0:
        raise InvalidArgumentError(f"invalid lattice sizes d={d} T={T} t={t_count} b={b_count} pairs={pair_count}")
    rng = np.random.default_rng([seed, 0])
    t = np.logspace(np.log10(LATTICE_T_MIN_FRACTION * T), np.log10(T), t_count)
    t[-1] = T
    b = np.sqrt(T) * rng.standard_normal((b_count, d))
    y = signed_magnitudes(exponents)

    axis = np.eye(d)[0]
    z = y[:, None] * axis[None, :]
    direction = axis
    if d > 1:
        direction = rng.standard_normal(d)
        direction /= np.linalg.norm(direction)
        z = np.concatenate([z, y[y != 0][:, None] * direction[None, :]])

    return Lattice(T=float(T), d=d, seed=int(seed), t=t, b=b, y=y, z=z, pair_count=int(pair_count),
                   direction=direction)
