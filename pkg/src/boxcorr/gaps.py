"""Gap lengths of a point set on the circle and their evolution along N."""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from .errors import DomainError
from .sequences import PointSet, SequenceSpec, generate

DEFAULT_TOL = 1e-9
GROWTH_THRESHOLD = 50.0
BOUND_THRESHOLD = 50.0


@dataclass(frozen=True)
class GapProfile:
    gaps: tuple  # ((value, multiplicity), ...) ascending
    tolerance: float
    n: int

    @property
    def distinct(self) -> int:
        return len(self.gaps)

    @property
    def total(self) -> float:
        return float(sum(v * m for v, m in self.gaps))


def circular_gaps(points: PointSet) -> np.ndarray:
    """The N gaps of the sorted points, the wrap gap last."""
    xs = points.sorted_points
    return np.append(np.diff(xs), xs[0] + 1.0 - xs[-1])


def _cluster(values, counts, tol):
    """Single-linkage clustering of sorted distinct values; the weighted mean
    represents each cluster."""
    out = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            v = np.asarray(values[start:i])
            c = np.asarray(counts[start:i])
            out.append((float(np.dot(v, c) / c.sum()), int(c.sum())))
            start = i
    return tuple(out)


def _check_tol(tol):
    if not tol >= 0:
        raise DomainError(f"tolerance must be nonnegative, got {tol!r}")


def gap_profile(points: PointSet, tol: float = DEFAULT_TOL) -> GapProfile:
    if points.n < 2:
        raise DomainError("gap profile needs at least two points")
    _check_tol(tol)
    values, counts = np.unique(circular_gaps(points), return_counts=True)
    return GapProfile(_cluster(values.tolist(), counts.tolist(), tol), float(tol), points.n)


def distinct_gap_count(points: PointSet, tol: float = DEFAULT_TOL) -> int:
    return gap_profile(points, tol).distinct


def prefix_gap_counts(points: PointSet, tol: float = DEFAULT_TOL) -> List[int]:
    """``distinct_gap_count`` of every prefix of length 2..N, incrementally.

    Element ``i`` of the result belongs to the prefix of length ``i + 2``.
    Gaps are formed with the same arithmetic as :func:`circular_gaps`.
    """
    _check_tol(tol)
    x = points.points.tolist()
    if len(x) < 2:
        raise DomainError("need at least two points")
    srt = sorted(x[:2])
    bag = Counter()

    def wrap():
        return srt[0] + 1.0 - srt[-1]

    bag[srt[1] - srt[0]] += 1
    bag[wrap()] += 1

    def count():
        keys = sorted(bag)
        return len(_cluster(keys, [bag[k] for k in keys], tol))

    def drop(v):
        bag[v] -= 1
        if not bag[v]:
            del bag[v]

    out = [count()]
    for v in x[2:]:
        i = bisect.bisect_right(srt, v)
        if 0 < i < len(srt):
            drop(srt[i] - srt[i - 1])
            srt.insert(i, v)
            bag[v - srt[i - 1]] += 1
            bag[srt[i + 1] - v] += 1
        else:
            drop(wrap())
            srt.insert(i, v)
            if i == 0:
                bag[srt[1] - v] += 1
            else:
                bag[v - srt[-2]] += 1
            bag[wrap()] += 1
        out.append(count())
    return out


@dataclass
class GapTrajectory:
    rank: int  # 1-based rank among distinct gaps, smallest first
    series: list = field(default_factory=list)  # [(N, d, N*d)]
    label: str = "undetermined"


def _classify(series, tol, growth_threshold, bound_threshold):
    d = [row[1] for row in series]
    nd = [row[2] for row in series]
    if all(v <= tol for v in d):
        return "zero"
    tail = nd[len(nd) // 2:]
    if nd[-1] > growth_threshold and all(b >= a for a, b in zip(tail, tail[1:])):
        return "large"
    if all(v > tol for v in d) and all(0.0 < v <= bound_threshold for v in nd):
        return "medium"
    return "undetermined"


def classify_gap_trajectories(spec, grid: Sequence[int], tol: float = DEFAULT_TOL,
                              growth_threshold: float = GROWTH_THRESHOLD,
                              bound_threshold: float = BOUND_THRESHOLD) -> List[GapTrajectory]:
    """Heuristic zero / medium / large labels for each gap rank along ``grid``.

    Only grid points carrying the most frequent distinct-gap count ``Z`` are
    used (ties go to the larger ``Z``); the j-th smallest gap is followed
    across them. With fewer than two such points every rank is undetermined.
    """
    grid = [int(g) for g in grid]
    if not grid:
        raise DomainError("grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 2:
        raise DomainError("grid must be strictly increasing with N >= 2")
    full = generate(spec, grid[-1]) if isinstance(spec, SequenceSpec) else spec
    profiles = [(g, gap_profile(full.prefix(g), tol)) for g in grid]
    freq = Counter(p.distinct for _, p in profiles)
    z = max(freq, key=lambda c: (freq[c], c))
    kept = [(g, p) for g, p in profiles if p.distinct == z]
    out = []
    for j in range(z):
        traj = GapTrajectory(rank=j + 1, series=[(g, p.gaps[j][0], g * p.gaps[j][0]) for g, p in kept])
        if len(kept) >= 2:
            traj.label = _classify(traj.series, tol, growth_threshold, bound_threshold)
        out.append(traj)
    return out
