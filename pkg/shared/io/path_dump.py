"""
Binary dump and load of PathBundle increments

Layout: one little-endian header record followed by the float64 increments
in row-major (path, step, component) order.
"""

from pathlib import Path

import numpy as np

from ..config.numerics_config import BUNDLE_MAGIC, BUNDLE_FORMAT_VERSION
from ..errors import InvalidArgumentError
from ..stochastic.brownian import PathBundle, SIMULATION_MODES
from ..stochastic.time_grid import make_grid
from ..utils.logging import get_logger

logger = get_logger(__name__)

HEADER_DTYPE = np.dtype([
    ("magic", "S8"),
    ("version", "<u2"),
    ("T", "<f8"),
    ("N", "<u4"),
    ("d", "<u4"),
    ("M", "<u8"),
    ("seed", "<u8"),
    ("mode", "u1"),
])

_MODE_CODES = {mode: code for code, mode in enumerate(SIMULATION_MODES)}


def dump_bundle(bundle, path):
    """
    Write a bundle to disk

    Args:
        bundle: PathBundle
        path: Destination file

    Returns:
        Path of the written file
    """
    path = Path(path)
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = BUNDLE_MAGIC
    header["version"] = BUNDLE_FORMAT_VERSION
    header["T"] = bundle.grid.horizon
    header["N"] = bundle.N
    header["d"] = bundle.d
    header["M"] = bundle.M
    header["seed"] = bundle.seed
    header["mode"] = _MODE_CODES[bundle.mode]

    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(np.ascontiguousarray(bundle.increments, dtype="<f8").tobytes(order="C"))

    logger.info(f"Wrote bundle ({bundle.M} x {bundle.N} x {bundle.d}) to {path}")
    return path


def load_bundle(path):
    """
    Read a bundle written by dump_bundle

    Nested bundles come back without stored node positions, so B is the
    prefix sum of the loaded increments.

    Raises:
        InvalidArgumentError: bad magic, unknown version or truncated payload
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise InvalidArgumentError(f"{path}: file too short for a bundle header")

    header = np.frombuffer(raw, dtype=HEADER_DTYPE, count=1)[0]
    if bytes(header["magic"]) != BUNDLE_MAGIC:
        raise InvalidArgumentError(f"{path}: not a path bundle (bad magic)")
    if int(header["version"]) != BUNDLE_FORMAT_VERSION:
        raise InvalidArgumentError(f"{path}: unsupported bundle version {int(header['version'])}")
    mode_code = int(header["mode"])
    if mode_code >= len(SIMULATION_MODES):
        raise InvalidArgumentError(f"{path}: unknown simulation mode code {mode_code}")

    M, N, d = int(header["M"]), int(header["N"]), int(header["d"])
    payload = raw[HEADER_DTYPE.itemsize:]
    if len(payload) != M * N * d * 8:
        raise InvalidArgumentError(f"{path}: expected {M * N * d} increments, found {len(payload) // 8}")

    increments = np.frombuffer(payload, dtype="<f8").reshape(M, N, d).astype(np.float64)
    increments.setflags(write=False)

    return PathBundle(
        grid=make_grid(float(header["T"]), N),
        d=d,
        increments=increments,
        seed=int(header["seed"]),
        mode=SIMULATION_MODES[mode_code],
    )
