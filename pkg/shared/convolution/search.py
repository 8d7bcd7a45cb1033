"""
Vectorized grid-and-zoom minimization over boxes

Each query row owns a box (center, half-widths). The box is covered by a
coarse stencil, the best few stencil points become tracks, and every track
is refined by a finer stencil spanning one coarse cell on each side until
the cell width falls below the requested pitch on every axis or a caller
test accepts the best point. Stencils have an odd number of points with
power-of-two spacing, so the box center and every track location are
reproduced exactly at the next level and a track's value never increases.
"""

from dataclasses import dataclass

import numpy as np

from ..config.numerics_config import (
    COARSE_POINTS_1D,
    COARSE_POINTS_ND,
    ENVELOPE_BATCH_SIZE,
    ENVELOPE_CHUNK_ELEMENTS,
    ENVELOPE_TRACKS,
    MAX_ZOOM_LEVELS,
    REFINE_POINTS_1D,
    REFINE_POINTS_ND,
)
from ..utils.parallel import ordered_map


@dataclass
class BoxSearchResult:
    """
    Minimizers found by box_minimize

    Attributes:
        value: Best objective value per row, shape (P,)
        location: Best point per row, shape (P, k)
        spacing: Final cell width per row and axis, shape (P, k)
        descent: How far the best neighbouring stencil point still undercuts
            the returned value (0 when the search settled)
        levels: Zoom levels used per row
    """

    value: np.ndarray
    location: np.ndarray
    spacing: np.ndarray
    descent: np.ndarray
    levels: np.ndarray


def grid_offsets(points_per_axis, k):
    """Tensor stencil on [-1, 1]^k, shape (points_per_axis**k, k)"""
    axis = np.linspace(-1.0, 1.0, points_per_axis)
    mesh = np.meshgrid(*([axis] * k), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def stencil_sizes(k):
    """(coarse, refine) points per axis for a k-dimensional search"""
    if k == 1:
        return COARSE_POINTS_1D, REFINE_POINTS_1D
    return COARSE_POINTS_ND, REFINE_POINTS_ND


def _minimize_rows(objective, rows, centers, half_widths, pitch, coarse, refine, tracks, settled=None):
    k = centers.shape[1]
    R = len(rows)

    coarse_offsets = grid_offsets(coarse, k)
    points = centers[:, None, :] + coarse_offsets[None, :, :] * half_widths[:, None, :]
    values = objective(rows, points)

    tracks = min(tracks, points.shape[1])
    order = np.argsort(values, axis=1, kind="stable")[:, :tracks]
    track_values = np.take_along_axis(values, order, axis=1)
    track_points = np.take_along_axis(points, order[:, :, None], axis=1)

    spacing = 2.0 * half_widths / (coarse - 1)
    shrink = (refine - 1) / 2.0
    refine_offsets = grid_offsets(refine, k)
    S = refine_offsets.shape[0]
    levels = np.zeros(R, dtype=np.int64)

    def pending():
        coarse_rows = np.any(spacing > pitch, axis=1)
        if settled is None:
            return coarse_rows
        best = track_points[np.arange(R), np.argmin(track_values, axis=1)]
        return coarse_rows & ~settled(rows, best, spacing)

    active = pending()
    level = 0
    while active.any() and level < MAX_ZOOM_LEVELS:
        idx = np.flatnonzero(active)
        base = track_points[idx]
        window = base[:, :, None, :] + refine_offsets[None, None, :, :] * spacing[idx][:, None, None, :]
        flat = window.reshape(len(idx), tracks * S, k)
        candidate = objective(rows[idx], flat).reshape(len(idx), tracks, S)

        best = np.argmin(candidate, axis=2)
        new_values = np.take_along_axis(candidate, best[:, :, None], axis=2)[:, :, 0]
        new_points = np.take_along_axis(window, best[:, :, None, None], axis=2)[:, :, 0, :]

        improved = new_values <= track_values[idx]
        track_values[idx] = np.where(improved, new_values, track_values[idx])
        track_points[idx] = np.where(improved[:, :, None], new_points, track_points[idx])

        spacing[idx] = spacing[idx] / shrink
        levels[idx] += 1
        level += 1
        active = pending()

    winner = np.argmin(track_values, axis=1)
    value = track_values[np.arange(R), winner]
    location = track_points[np.arange(R), winner]

    # Axis neighbours at the final cell width
    steps = np.concatenate([np.eye(k), -np.eye(k)], axis=0)
    neighbours = location[:, None, :] + steps[None, :, :] * spacing[:, None, :]
    descent = np.maximum(value - np.min(objective(rows, neighbours), axis=1), 0.0)

    return value, location, spacing, descent, levels


def box_minimize(objective, centers, half_widths, pitch, tracks=ENVELOPE_TRACKS, workers=None, settled=None):
    """
    Minimize objective over one box per row

    Args:
        objective: Callable (rows, points[R, S, k]) -> values[R, S]; rows are
            indices into the full batch
        centers: Box centers, shape (P, k)
        half_widths: Box half-widths, shape (P, k), strictly positive
        pitch: Target cell width per row and axis, shape (P, k)
        tracks: Coarse candidates refined independently
        workers: Thread count for row chunks
        settled: Optional callable (rows, location[R, k], spacing[R, k]) -> bool[R];
            rows it accepts stop zooming before reaching the pitch

    Returns:
        BoxSearchResult
    """
    centers = np.asarray(centers, dtype=float)
    half_widths = np.asarray(half_widths, dtype=float)
    pitch = np.broadcast_to(np.asarray(pitch, dtype=float), centers.shape)
    P, k = centers.shape
    coarse, refine = stencil_sizes(k)

    per_row = max(coarse ** k, tracks * refine ** k)
    chunk = int(max(1, min(ENVELOPE_BATCH_SIZE, ENVELOPE_CHUNK_ELEMENTS // per_row)))
    chunks = [np.arange(start, min(start + chunk, P)) for start in range(0, P, chunk)]

    def run(rows):
        return _minimize_rows(objective, rows, centers[rows], half_widths[rows], pitch[rows].copy(),
                              coarse, refine, tracks, settled=settled)

    parts = ordered_map(run, chunks, workers=workers)
    if not parts:
        empty = np.zeros((0, k))
        return BoxSearchResult(np.zeros(0), empty, empty, np.zeros(0), np.zeros(0, dtype=np.int64))

    return BoxSearchResult(
        value=np.concatenate([p[0] for p in parts]),
        location=np.concatenate([p[1] for p in parts]),
        spacing=np.concatenate([p[2] for p in parts]),
        descent=np.concatenate([p[3] for p in parts]),
        levels=np.concatenate([p[4] for p in parts]),
    )
