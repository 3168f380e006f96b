"""Triangular coefficient table V_{nα} of the fundamental solution series.

The table is built column by column from the potential harmonics, can be
rebuilt from its diagonal alone, and gives the harmonics back through its
column sums.
"""

import logging

import numpy as np

from app.config import settings
from app.data.models import Potential, TailNorm, VTable

logger = logging.getLogger(__name__)


def default_order(potential: Potential) -> int:
    """Default truncation order max(2N, min_truncation)."""
    return max(2 * potential.N, settings.min_truncation)


def build_vtable(potential: Potential, order: int | None = None) -> VTable:
    """
    Builds V_{nα} for 1 ≤ n ≤ α ≤ order from the harmonic recurrences.

    Column α first fills the off-diagonal entries
    V_{nα} = -(1/(α(α-n))) Σ_{s=n}^{α-1} q_{α-s} V_{ns}, then the diagonal
    V_{αα} = -q_α/α - Σ_{n<α} V_{nα}.

    Args:
        potential: Harmonics q₁…q_N; harmonics beyond the order are ignored
        order: Truncation order A, defaults to max(2N, min_truncation)

    Returns:
        The read-only table
    """
    order = default_order(potential) if order is None else order
    if order <= 0:
        raise ValueError(f"truncation order must be positive, got {order}")
    if order < potential.N:
        logger.warning(
            "Truncation order %d is below the highest harmonic %d; harmonics above it are dropped",
            order,
            potential.N,
        )

    q = potential.padded(order)
    v = np.zeros((order, order), dtype=complex)
    for j in range(order):
        alpha = j + 1
        if j > 0:
            n = np.arange(1, j + 1)
            # Σ_k V[n, k] q_{α-k} with k running over the earlier columns
            conv = v[:j, :j] @ q[:j][::-1]
            v[:j, j] = -conv / (alpha * (alpha - n))
        v[j, j] = -q[j] / alpha - v[:j, j].sum()

    table = VTable(entries=v)
    tail = tail_norm(table)
    if tail.ratio > settings.tail_warning_ratio:
        logger.warning(
            "Last column carries %.3e of the tail norm at order %d; increase the truncation",
            tail.ratio,
            order,
        )
    logger.debug("Built V-table of order %d (tail norm %.6e)", order, tail.total)
    return table


def tail_norm(table: VTable) -> TailNorm:
    """Truncated convergence norm Σ_n (1/n) Σ_α α|V_{nα}| and its last-column share."""
    order = table.A
    n = np.arange(1, order + 1)
    weighted = np.abs(table.entries) * n[np.newaxis, :]
    total = float((weighted.sum(axis=1) / n).sum())
    last = float((weighted[:, -1] / n).sum())
    return TailNorm(total=total, last_column=last)


def reconstruct_vtable(diagonal: np.ndarray | list[complex], order: int | None = None) -> VTable:
    """
    Rebuilds the full table from its diagonal.

    Off-diagonal entries follow V_{n,α+n} = V_{nn} Σ_{m=1}^{α} V_{mα}/(m+n);
    target columns are filled in ascending order, since entry (n, c) only
    reads column c-n.

    Args:
        diagonal: V₁₁…V_AA
        order: Expected length A; defaults to the diagonal length

    Returns:
        The read-only table
    """
    diag = np.asarray(diagonal, dtype=complex)
    order = diag.size if order is None else order
    if order <= 0 or diag.shape != (order,):
        raise ValueError(f"diagonal must have length {order}, got shape {diag.shape}")

    v = np.zeros((order, order), dtype=complex)
    v[np.diag_indices(order)] = diag
    for c in range(2, order + 1):
        for n in range(1, c):
            alpha = c - n
            m = np.arange(1, alpha + 1)
            v[n - 1, c - 1] = diag[n - 1] * np.sum(v[:alpha, alpha - 1] / (m + n))
    return VTable(entries=v)


def q_from_vtable(table: VTable) -> Potential:
    """Recovers q_α = -α Σ_n V_{nα} for α = 1…A."""
    alpha = np.arange(1, table.A + 1)
    q = -alpha * table.column_sums()
    return Potential(harmonics=tuple(complex(c) for c in q))
