"""Box correlation statistics ``R_{k,beta}`` and their relatives.

All counts are of ordered tuples of distinct indices. Thresholds are
inclusive and every code path compares the same double-precision distance
``torus_dist(x_j, x_anchor)`` against the same radius ``s / N**beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence, Union

import numpy as np

from . import _kernels as K
from .errors import DomainError, SizeError
from .sequences import PointSet, SequenceSpec, generate
from .torus import frac, signed_nearest_array, torus_dist_array

ORACLE_BOUND = 200


@dataclass(frozen=True)
class CorrelationQuery:
    k: int
    beta: float
    s: tuple

    def __post_init__(self):
        s = tuple(float(v) for v in self.s)
        object.__setattr__(self, "s", s)
        if int(self.k) != self.k or self.k < 2:
            raise DomainError(f"k must be an integer >= 2, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))
        if not (0.0 < self.beta <= 1.0):
            raise DomainError(f"beta must lie in (0, 1], got {self.beta!r}")
        if len(s) != self.k - 1:
            raise DomainError(f"k={self.k} needs {self.k - 1} window parameters, got {len(s)}")
        if not all(math.isfinite(v) and v > 0 for v in s):
            raise DomainError(f"window parameters must be positive, got {s}")

    @classmethod
    def make(cls, s, beta=1.0, k=None) -> "CorrelationQuery":
        """Build from a window vector, inferring ``k = len(s) + 1``."""
        s = tuple(s)
        if k is None:
            k = len(s) + 1
        return cls(k=k, beta=float(beta), s=s)

    @property
    def target(self) -> float:
        return math.prod(2.0 * v for v in self.s)

    def radii(self, n: int):
        scale = float(n) ** self.beta
        return [v / scale for v in self.s]

    def describe(self) -> dict:
        return {"k": self.k, "beta": self.beta, "s": list(self.s)}


@dataclass(frozen=True)
class CorrelationResult:
    raw_count: int
    normalized: float
    target: float
    n: int

    @property
    def abs_error(self) -> float:
        return abs(self.normalized - self.target)


def normalizer(n: int, k: int, beta: float) -> float:
    """``N ** (k - (k-1) beta)``."""
    return float(n) ** (k - (k - 1) * beta)


def _require(points: PointSet, need: int):
    if points.n < need:
        raise DomainError(f"need at least {need} points, got {points.n}")


def _distinct_mask(n: int, dims: int) -> np.ndarray:
    """Boolean array of shape ``(n,)*dims``: all coordinates distinct."""
    mask = np.ones((n,) * dims, dtype=bool)
    for a in range(dims):
        for b in range(a + 1, dims):
            shape_a = [1] * dims
            shape_b = [1] * dims
            shape_a[a] = n
            shape_b[b] = n
            mask &= np.arange(n).reshape(shape_a) != np.arange(n).reshape(shape_b)
    return mask


def _outer_and(cols):
    """Outer product of boolean/float vectors as a ``len(cols)``-dim array."""
    out = cols[0]
    for c in cols[1:]:
        out = np.multiply.outer(out, c)
    return out


def count_box_tuples_naive(points: PointSet, q: CorrelationQuery) -> int:
    """Brute force over every ordered k-tuple of distinct indices."""
    _require(points, q.k)
    x = points.points
    n = points.n
    radii = q.radii(n)
    dist = torus_dist_array(x[:, None], x[None, :])  # dist[j, anchor]
    masks = [dist <= r for r in radii]
    distinct = _distinct_mask(n, q.k - 1)
    total = 0
    for a in range(n):
        cols = [m[:, a].copy() for m in masks]
        for c in cols:
            c[a] = False
        total += int(np.count_nonzero(_outer_and(cols) & distinct))
    return total


def _nested_product(counts: list, dtype=np.int64):
    """``prod_m max(0, c_(m) - (m-1))`` with counts ordered ascending."""
    out = None
    for m, c in enumerate(counts):
        term = np.maximum(c - m, 0).astype(dtype)
        out = term if out is None else out * term
    return out


def _star_counts(xs, centers, radii, exclude_self, use_objects, threads):
    order = sorted(range(len(radii)), key=lambda l: radii[l])

    def work(chunk):
        a, b = chunk
        cache = {}
        counts = []
        for l in order:
            r = radii[l]
            if r not in cache:
                c = K.window_counts(xs, centers[a:b], r)
                cache[r] = c - 1 if exclude_self else c
            counts.append(cache[r])
        if use_objects:
            counts = [c.astype(object) for c in counts]
            prod = _nested_product(counts, dtype=object)
        else:
            prod = _nested_product(counts)
        return sum(int(v) for v in prod.tolist()) if use_objects else int(prod.sum())

    chunks = K.split_range(len(centers), 4 * K.resolve_threads(threads))
    return sum(K.parallel_map(work, chunks, threads))


def count_box_tuples(points: PointSet, q: CorrelationQuery, threads=None) -> int:
    """Fast exact count via nested concentric windows around each anchor."""
    _require(points, q.k)
    n = points.n
    xs = points.sorted_points
    big = float(n) ** q.k >= 2.0**62
    return _star_counts(xs, xs, q.radii(n), True, big, threads)


def r_stat(points: PointSet, q: CorrelationQuery, threads=None) -> CorrelationResult:
    count = count_box_tuples(points, q, threads=threads)
    return CorrelationResult(
        raw_count=count,
        normalized=count / normalizer(points.n, q.k, q.beta),
        target=q.target,
        n=points.n,
    )


def f_count(points: PointSet, t, q: CorrelationQuery, exclude_index=None) -> int:
    """Ordered distinct (k-1)-tuples all within their windows of the point ``t``.

    With ``exclude_index=i`` the index ``i`` is not allowed in the tuple,
    which is the per-anchor term of the star count.
    """
    _require(points, q.k - 1)
    n = points.n
    t = frac(float(t))
    radii = q.radii(n)
    dist = torus_dist_array(points.points, t)
    keep = np.ones(n, dtype=bool)
    if exclude_index is not None:
        keep[int(exclude_index)] = False
    counts = sorted(int(np.count_nonzero((dist <= r) & keep)) for r in radii)
    out = 1
    for m, c in enumerate(counts):
        out *= max(0, c - m)
    return out


def chain_count_naive(points: PointSet, q: CorrelationQuery, oracle_bound: int = ORACLE_BOUND) -> int:
    """Ordered distinct k-tuples with ``||x_{i_l} - x_{i_{l+1}}|| <= s_l / N^beta``."""
    _require(points, q.k)
    n = points.n
    if n > oracle_bound:
        raise SizeError(f"chain counting is O(N^k); N={n} exceeds the bound {oracle_bound}")
    x = points.points
    radii = q.radii(n)
    dist = torus_dist_array(x[:, None], x[None, :])
    adj = [dist <= r for r in radii]
    distinct = _distinct_mask(n, q.k - 1)
    total = 0
    for first in range(n):
        # arr[i2, ..., ik]: the chain first -> i2 -> ... -> ik is admissible
        arr = adj[0][first].copy()
        arr[first] = False
        for l in range(1, q.k - 1):
            step = adj[l].copy()
            step[first, :] = False
            step[:, first] = False
            arr = arr[..., None] & step.reshape((1,) * (l - 1) + (n, n))
        total += int(np.count_nonzero(arr & distinct))
    return total


@dataclass(frozen=True)
class TestFunction:
    """Product of per-axis piecewise-linear bumps.

    Each factor is a sequence of ``(position, value)`` breakpoints with
    strictly increasing positions and zero value at both ends.
    """

    __test__ = False  # not a pytest class

    factors: tuple

    def __post_init__(self):
        facs = []
        for f in self.factors:
            bp = np.asarray(f, dtype=np.float64)
            if bp.ndim != 2 or bp.shape[1] != 2 or bp.shape[0] < 2:
                raise DomainError("each factor needs at least two (position, value) breakpoints")
            if not np.all(np.isfinite(bp)):
                raise DomainError("breakpoints must be finite")
            if np.any(np.diff(bp[:, 0]) <= 0):
                raise DomainError("breakpoint positions must increase strictly")
            if bp[0, 1] != 0.0 or bp[-1, 1] != 0.0:
                raise DomainError("factors must vanish at their first and last breakpoint")
            facs.append(tuple(map(tuple, bp.tolist())))
        object.__setattr__(self, "factors", tuple(facs))

    @classmethod
    def tents(cls, widths, peak=1.0) -> "TestFunction":
        return cls(tuple(((-w, 0.0), (0.0, peak), (w, 0.0)) for w in widths))

    @classmethod
    def trapezoids(cls, inner, outer) -> "TestFunction":
        """Equal to 1 on ``[-inner, inner]``, 0 outside ``[-outer, outer]``."""
        return cls(tuple(
            ((-o, 0.0), (-i, 1.0), (i, 1.0), (o, 0.0)) if i > 0 else ((-o, 0.0), (0.0, 1.0), (o, 0.0))
            for i, o in zip(inner, outer)
        ))

    @property
    def dim(self) -> int:
        return len(self.factors)

    def support_radius(self, axis: int) -> float:
        bp = self.factors[axis]
        return max(abs(bp[0][0]), abs(bp[-1][0]))

    def factor(self, axis: int, x) -> np.ndarray:
        bp = np.asarray(self.factors[axis])
        return np.interp(x, bp[:, 0], bp[:, 1], left=0.0, right=0.0)

    def __call__(self, *xs) -> float:
        return math.prod(float(self.factor(i, v)) for i, v in enumerate(xs))


def _functional_naive(points, q, f):
    x = points.points
    n = points.n
    scale = float(n) ** q.beta
    diff = signed_nearest_array(x[:, None] - x[None, :]) * scale  # diff[j, anchor]
    w = [f.factor(l, diff) for l in range(q.k - 1)]
    distinct = _distinct_mask(n, q.k - 1)
    per_anchor = []
    for a in range(n):
        cols = [wl[:, a].copy() for wl in w]
        for c in cols:
            c[a] = 0.0
        per_anchor.append(float(np.sum(_outer_and(cols) * distinct)))
    return math.fsum(per_anchor)


def _functional_fast(points, q, f, threads):
    n = points.n
    xs = points.sorted_points
    scale = float(n) ** q.beta
    reach = max(f.support_radius(l) for l in range(q.k - 1)) / scale
    slots = tuple(range(q.k - 1))

    def work(chunk):
        a, b, anchor, other = chunk
        diff = signed_nearest_array(xs[other] - xs[anchor]) * scale
        w = [f.factor(l, diff) for l in slots]
        local = anchor - a

        def block_sum(block):
            prod = w[block[0]]
            for l in block[1:]:
                prod = prod * w[l]
            return np.bincount(local, weights=prod, minlength=b - a)

        return K.injective_sum(slots, block_sum)

    parts = K.parallel_map(work, K.pair_chunks(xs, reach), threads)
    return math.fsum(np.concatenate([np.atleast_1d(p) for p in parts]).tolist())


def functional_stat(points: PointSet, q: CorrelationQuery, f: TestFunction,
                    oracle_bound: int = 40, method: str = "auto", threads=None) -> float:
    """``R_{k,beta}(f, N)`` for a product test function ``f``.

    ``method`` is ``"naive"`` (every tuple), ``"fast"`` (per-anchor candidates
    inside the support, injectivity by partition inversion) or ``"auto"``,
    which is naive for ``N <= oracle_bound``.
    """
    _require(points, q.k)
    if not isinstance(f, TestFunction) or f.dim != q.k - 1:
        raise DomainError(f"test function must have {q.k - 1} factors")
    if method == "auto":
        method = "naive" if points.n <= oracle_bound else "fast"
    if method == "naive":
        total = _functional_naive(points, q, f)
    elif method == "fast":
        total = _functional_fast(points, q, f, threads)
    else:
        raise DomainError(f"unknown method {method!r}")
    return total / normalizer(points.n, q.k, q.beta)


def sweep(source: Union[SequenceSpec, PointSet], q: CorrelationQuery, grid: Sequence[int], threads=None):
    """``r_stat`` on each length-N prefix; returns ``[(N, CorrelationResult)]``."""
    grid = [int(g) for g in grid]
    if not grid:
        raise DomainError("grid must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    if grid[0] < q.k:
        raise DomainError(f"every grid value must be >= k={q.k}")
    full = generate(source, grid[-1]) if isinstance(source, SequenceSpec) else source
    if full.n < grid[-1]:
        raise DomainError(f"point set has {full.n} points, grid needs {grid[-1]}")
    return [(g, r_stat(full.prefix(g), q, threads=threads)) for g in grid]
