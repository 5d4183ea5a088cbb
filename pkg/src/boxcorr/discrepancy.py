"""Exact one-dimensional star discrepancy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .sequences import PointSet


@dataclass(frozen=True)
class DiscrepancyResult:
    d_star: float
    argmax_prefix: float  # right end b of the extremal [0, b), as a limit


def star_discrepancy(points: PointSet) -> DiscrepancyResult:
    """``sup_b |#{x_i < b}/N - b|`` via the sorted-order closed form."""
    if points is None or points.n < 1:
        raise DomainError("star discrepancy needs at least one point")
    xs = points.sorted_points
    n = xs.size
    i = np.arange(1, n + 1, dtype=np.float64)
    dev = np.maximum(np.abs(xs - (i - 1) / n), np.abs(xs - i / n))
    j = int(np.argmax(dev))
    return DiscrepancyResult(float(dev[j]), float(xs[j]))


def star_discrepancy_brute(points: PointSet) -> float:
    """Supremum over candidate right ends: point values and ``i/N``, each
    with neighbouring doubles. Independent check of :func:`star_discrepancy`."""
    x = np.sort(points.points)
    n = x.size
    cand = np.concatenate([x, np.arange(n + 1) / n])
    cand = np.concatenate([cand, np.nextafter(cand, -np.inf), np.nextafter(cand, np.inf)])
    cand = cand[(cand > 0.0) & (cand <= 1.0)]
    inside = np.searchsorted(x, cand, side="left")  # #{x_i < b}
    return float(np.max(np.abs(inside / n - cand)))
