"""Integral characterisation of box correlations via ``G_beta * H_beta``.

Covers the pointwise functions, the exact closed form of their integral over
the torus, a midpoint-rule oracle for it, the hinge sum (the integral of
``R_{k,beta}`` over the window box), the ``phi`` recursion and the
inclusion-exclusion identities for boxes anchored at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from . import _kernels as K
from .correlations import (
    CorrelationQuery,
    _distinct_mask,
    _outer_and,
    _require,
    normalizer,
)
from .errors import DomainError, SizeError
from .sequences import PointSet
from .torus import arc_overlap_array, frac, torus_dist_array


@dataclass(frozen=True)
class GHQuery:
    q: CorrelationQuery
    t: tuple

    def __post_init__(self):
        t = tuple(frac(float(v)) for v in self.t)
        if len(t) != self.q.k - 1:
            raise DomainError(f"need {self.q.k - 1} evaluation coordinates, got {len(t)}")
        object.__setattr__(self, "t", t)


def _half_radii(q: CorrelationQuery, n: int):
    scale = 2.0 * float(n) ** q.beta
    return [v / scale for v in q.s]


def g_beta(points: PointSet, gh: GHQuery) -> float:
    q = gh.q
    _require(points, q.k - 1)
    n = points.n
    slots = tuple(range(q.k - 1))
    hits = [torus_dist_array(points.points, t) <= r for t, r in zip(gh.t, _half_radii(q, n))]

    def block_sum(block):
        m = hits[block[0]]
        for l in block[1:]:
            m = m & hits[l]
        return int(np.count_nonzero(m))

    count = K.injective_sum(slots, block_sum)
    return count / float(n) ** (q.k - 1 - (q.k - 1) * q.beta)


def h_beta(points: PointSet, gh: GHQuery) -> float:
    q = gh.q
    n = points.n
    m = np.ones(n, dtype=bool)
    for t, r in zip(gh.t, _half_radii(q, n)):
        m &= torus_dist_array(points.points, t) <= r
    return int(np.count_nonzero(m)) / float(n) ** (1 - (q.k - 1) * q.beta)


def _pair_weight_sums(points, q, weight, reach, slot_sets, threads):
    """Per-anchor injective sums for each slot subset in ``slot_sets``.

    ``weight(l, dist)`` gives the slot-``l`` weight of a neighbour at torus
    distance ``dist`` from the anchor; it must vanish beyond ``reach``.
    Returns ``{slots: per-anchor float array}`` in sorted-anchor order.
    """
    xs = points.sorted_points
    k1 = q.k - 1

    def work(chunk):
        a, b, anchor, other = chunk
        d = torus_dist_array(xs[other], xs[anchor])
        w = [weight(l, d) for l in range(k1)]
        local = anchor - a
        cache = {}

        def block_sum(block):
            if block not in cache:
                prod = w[block[0]]
                for l in block[1:]:
                    prod = prod * w[l]
                cache[block] = np.bincount(local, weights=prod, minlength=b - a)
            return cache[block]

        out = {}
        for slots in slot_sets:
            v = K.injective_sum(slots, block_sum)
            out[slots] = np.broadcast_to(np.asarray(v, dtype=np.float64), (b - a,))
        return out

    parts = K.parallel_map(work, K.pair_chunks(xs, reach), threads)
    return {slots: np.concatenate([p[slots] for p in parts]) for slots in slot_sets}


def hinge_sum(points: PointSet, q: CorrelationQuery, threads=None) -> float:
    """``N^{-(k-(k-1)beta)} sum prod_l {s_l - N^beta ||x_{i_l} - x_{i_k}||}^+``."""
    _require(points, q.k)
    n = points.n
    scale = float(n) ** q.beta
    s = q.s
    slots = tuple(range(q.k - 1))

    def weight(l, d):
        return np.maximum(s[l] - scale * d, 0.0)

    sums = _pair_weight_sums(points, q, weight, max(s) / scale, [slots], threads)
    return math.fsum(sums[slots].tolist()) / normalizer(n, q.k, q.beta)


def hinge_sum_naive(points: PointSet, q: CorrelationQuery) -> float:
    """Brute-force hinge sum over every ordered k-tuple (small N only)."""
    _require(points, q.k)
    x = points.points
    n = points.n
    scale = float(n) ** q.beta
    dist = torus_dist_array(x[:, None], x[None, :])
    w = [np.maximum(v - scale * dist, 0.0) for v in q.s]
    distinct = _distinct_mask(n, q.k - 1)
    per_anchor = []
    for a in range(n):
        cols = [wl[:, a].copy() for wl in w]
        for c in cols:
            c[a] = 0.0
        per_anchor.append(float(np.sum(_outer_and(cols) * distinct)))
    return math.fsum(per_anchor) / normalizer(n, q.k, q.beta)


@dataclass(frozen=True)
class GHIntegral:
    """Closed form of the G*H integral split into its two sums."""

    tuple_term: float
    diagonal_term: float

    @property
    def value(self) -> float:
        return self.tuple_term + self.diagonal_term


def gh_integral_terms(points: PointSet, q: CorrelationQuery, threads=None) -> GHIntegral:
    """Tuple term (k distinct indices) and diagonal term (an index of G shared
    with H) of ``int G_beta H_beta dt``; ball overlaps use :func:`arc_overlap`."""
    _require(points, q.k)
    n = points.n
    rho = _half_radii(q, n)
    k1 = q.k - 1
    slots = tuple(range(k1))

    def weight(l, d):
        return arc_overlap_array(0.0, rho[l], d, rho[l])

    reducts = [tuple(l for l in slots if l != j) for j in slots]
    sums = _pair_weight_sums(points, q, weight, 2.0 * max(rho), [slots] + reducts, threads)
    norm = float(n) ** (q.k - 2 * k1 * q.beta)
    tuple_term = math.fsum(sums[slots].tolist()) / norm
    diag = []
    for j in slots:
        ball = float(arc_overlap_array(0.0, rho[j], 0.0, rho[j]))
        diag.append(ball * math.fsum(sums[reducts[j]].tolist()))
    return GHIntegral(tuple_term, math.fsum(diag) / norm)


def gh_integral_closed(points: PointSet, q: CorrelationQuery, threads=None) -> float:
    return gh_integral_terms(points, q, threads=threads).value


def gh_integral_quadrature(points: PointSet, q: CorrelationQuery, resolution: int) -> float:
    """Midpoint-rule value of ``int_{[0,1]^{k-1}} G_beta H_beta`` (k = 2 or 3)."""
    if q.k > 3:
        raise SizeError("quadrature oracle supports k <= 3 only")
    if int(resolution) != resolution or resolution < 10:
        raise DomainError(f"resolution must be an integer >= 10, got {resolution!r}")
    _require(points, q.k)
    n = points.n
    m = int(resolution)
    nodes = (np.arange(m) + 0.5) / m
    rho = _half_radii(q, n)
    # cover[l][node, j]: point j's slot-l ball contains the node
    cover = [(torus_dist_array(nodes[:, None], points.points[None, :]) <= r).astype(np.float64) for r in rho]
    g_norm = float(n) ** (q.k - 1 - (q.k - 1) * q.beta)
    h_norm = float(n) ** (1 - (q.k - 1) * q.beta)
    if q.k == 2:
        c = cover[0].sum(axis=1)
        g = c
        h = c
        total = math.fsum((g * h).tolist())
    else:
        both = cover[0] @ cover[1].T  # both[t1, t2] = #j covering t1 and t2
        g = np.outer(cover[0].sum(axis=1), cover[1].sum(axis=1)) - both
        total = math.fsum((g * both).ravel().tolist())
    return total / (g_norm * h_norm) / m ** (q.k - 1)


def _grid_thresholds(points, q):
    """Per-tuple scaled distances ``N^beta ||x_{i_l} - x_{i_k}||`` of every
    ordered distinct tuple, shape ``(tuples, k-1)``."""
    x = points.points
    n = points.n
    scale = float(n) ** q.beta
    dist = torus_dist_array(x[:, None], x[None, :]) * scale
    k1 = q.k - 1
    idx = np.nonzero(_distinct_mask(n, k1))
    rows = []
    for a in range(n):
        keep = np.ones(idx[0].shape, dtype=bool)
        for c in idx:
            keep &= c != a
        rows.append(np.stack([dist[c[keep], a] for c in idx], axis=1))
    return np.concatenate(rows)


def r_stat_box_quadrature(points: PointSet, q: CorrelationQuery, resolution: int = 200) -> float:
    """Midpoint rule for ``int_0^{s_1}...int_0^{s_{k-1}} R_{k,beta}(sigma, N) dsigma``.

    ``R`` is evaluated on the whole node grid at once as a cumulative
    histogram of the per-tuple thresholds; brute force, small N only.
    """
    _require(points, q.k)
    m = int(resolution)
    k1 = q.k - 1
    thr = _grid_thresholds(points, q)
    hist = np.zeros((m + 1,) * k1, dtype=np.int64)
    bins = []
    for l in range(k1):
        step = q.s[l] / m
        nodes = (np.arange(m) + 0.5) * step
        # first node index with node >= threshold; m means never counted
        bins.append(np.searchsorted(nodes, thr[:, l], side="left"))
    np.add.at(hist, tuple(bins), 1)
    counts = hist[(slice(0, m),) * k1]
    for axis in range(k1):
        counts = np.cumsum(counts, axis=axis)
    cell = math.prod(v / m for v in q.s)
    return float(counts.sum()) * cell / normalizer(points.n, q.k, q.beta)


def r_stat_on_grid_node(points: PointSet, q: CorrelationQuery, node, resolution: int = 200) -> float:
    """``R_{k,beta}`` at the midpoint node with integer coordinates ``node``."""
    sig = [(j + 0.5) * v / resolution for j, v in zip(node, q.s)]
    from .correlations import r_stat

    return r_stat(points, CorrelationQuery(q.k, q.beta, tuple(sig))).normalized


def phi(s) -> float:
    """``phi(()) = 1``; ``phi(s) = prod s_i^2 + sum_j s_j phi(s without s_j)``."""
    s = tuple(float(v) for v in s)
    if any(not (v > 0 and math.isfinite(v)) for v in s):
        raise DomainError(f"phi needs positive arguments, got {s}")
    return _phi(tuple(sorted(s)))


@lru_cache(maxsize=None)
def _phi(s: tuple) -> float:
    if not s:
        return 1.0
    total = math.prod(v * v for v in s)
    for j in range(len(s)):
        total += s[j] * _phi(s[:j] + s[j + 1:])
    return total


def gh_expansion_limit(s) -> float:
    """Limit of the G*H closed form at beta = 1 for a sequence whose box
    statistics of every order up to k are Poissonian:
    ``prod s_i^2 + sum_j s_j prod_{l != j} s_l^2``."""
    s = tuple(float(v) for v in s)
    sq = [v * v for v in s]
    return math.prod(sq) + sum(s[j] * math.prod(sq[:j] + sq[j + 1:]) for j in range(len(s)))


def inclusion_exclusion_expand(a, b):
    """Signed origin-anchored corners whose indicators sum to ``1_{prod [a_i, b_i]}`` a.e.

    Returns ``[(sign, corner)]`` with ``corner[i] = a_i`` for ``i`` in the
    subset ``P`` and ``b_i`` otherwise, ``sign = (-1)^{|P|}``; subsets are
    listed by size, then lexicographically.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if len(a) != len(b) or not a:
        raise DomainError("a and b must be nonempty and of equal length")
    for ai, bi in zip(a, b):
        if not (0.0 <= ai < bi):
            raise DomainError(f"need 0 <= a_i < b_i, got a_i={ai}, b_i={bi}")
    k = len(a)
    out = []
    for size in range(k + 1):
        for P in combinations(range(k), size):
            corner = tuple(a[i] if i in P else b[i] for i in range(k))
            out.append((-1 if size % 2 else 1, corner))
    return out


def corner_indicator_sum(expansion, x) -> np.ndarray:
    """Evaluate ``sum sign * 1_{prod [0, c_i]}`` at points ``x`` of shape ``(m, k)``."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    total = np.zeros(x.shape[0], dtype=np.int64)
    for sign, corner in expansion:
        inside = np.all((x >= 0.0) & (x <= np.asarray(corner)), axis=1)
        total += sign * inside
    return total


@dataclass(frozen=True)
class CornerSum:
    exact: float
    leading: float


def corner_alternating_sum(s, eps: float) -> CornerSum:
    """``sum_P (-1)^{|P|} prod_{i in P}(s_i - eps)^2 prod_{i not in P} s_i^2``
    and its leading term ``prod 2 s_i eps``."""
    s = [float(v) for v in s]
    if any(v <= 0 for v in s):
        raise DomainError("s entries must be positive")
    if not eps > 0 or (s and eps >= min(s)):
        raise DomainError(f"need 0 < eps < min(s), got eps={eps!r}")
    # The subset sum factorizes as prod_i (s_i^2 - (s_i - eps)^2); summing the
    # 2^m signed terms directly cancels catastrophically for small eps.
    exact = math.prod(eps * (2.0 * v - eps) for v in s)
    return CornerSum(exact=exact, leading=math.prod(2.0 * v * eps for v in s))
