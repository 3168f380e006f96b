"""Argument-principle winding numbers along rectangle boundaries."""

import logging
from collections.abc import Callable

import numpy as np

from app.data.models import Rectangle
from app.errors import ContourThroughZero

logger = logging.getLogger(__name__)

MAX_PHASE_STEP = np.pi / 2


def edge_phase(
    func: Callable[[np.ndarray], np.ndarray],
    start: complex,
    end: complex,
    zero_guard: float,
    initial_points: int = 33,
    max_rounds: int = 48,
) -> float:
    """
    Accumulated phase change of func along the segment start → end.

    Segments whose phase increment reaches π/2 are bisected until every
    increment is below it.

    Raises:
        ContourThroughZero: If a sample is numerically zero or refinement stalls
    """
    ts = np.linspace(0.0, 1.0, initial_points)
    vals = np.asarray(func(start + ts * (end - start)), dtype=complex)
    for _ in range(max_rounds):
        if np.min(np.abs(vals)) < zero_guard:
            raise ContourThroughZero(f"zero on the contour between {start} and {end}")
        increments = np.angle(vals[1:] / vals[:-1])
        coarse = np.abs(increments) >= MAX_PHASE_STEP
        if not coarse.any():
            return float(increments.sum())
        mids = 0.5 * (ts[:-1][coarse] + ts[1:][coarse])
        new_vals = np.asarray(func(start + mids * (end - start)), dtype=complex)
        ts = np.concatenate([ts, mids])
        vals = np.concatenate([vals, new_vals])
        order = np.argsort(ts)
        ts, vals = ts[order], vals[order]
    raise ContourThroughZero(f"phase refinement stalled between {start} and {end}")


def winding_number(
    func: Callable[[np.ndarray], np.ndarray], rect: Rectangle, zero_guard: float
) -> int:
    """Number of zeros minus poles of func inside rect."""
    corners = rect.corners()
    total = sum(
        edge_phase(func, corners[k], corners[(k + 1) % 4], zero_guard) for k in range(4)
    )
    turns = total / (2 * np.pi)
    count = round(turns)
    if abs(turns - count) > 1e-6:
        logger.warning("Winding %.6f around %s is not close to an integer", turns, rect)
    return count
