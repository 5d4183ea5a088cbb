"""Shared counting machinery: exact window counts, neighbour pairs, and
injective (distinct-index) weighted sums."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

# Candidate extraction widens windows by this much; exact predicates decide.
SLACK = 1e-9
PAIR_BUDGET = 1 << 21


def resolve_threads(threads=None) -> int:
    if threads is None:
        env = os.environ.get("BOXCORR_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def split_range(n: int, parts: int):
    """Contiguous ``(start, stop)`` chunks covering ``range(n)``."""
    parts = max(1, min(parts, n))
    edges = np.linspace(0, n, parts + 1).astype(np.int64)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def parallel_map(fn, items, threads=None):
    """``[fn(x) for x in items]``, possibly evaluated on a thread pool."""
    threads = resolve_threads(threads)
    items = list(items)
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _first_true(pred, lo, hi):
    """Vectorized bisection: first index in ``[lo, hi)`` where the monotone
    (false...true) predicate holds, or ``hi`` when it never does."""
    lo = np.array(lo, dtype=np.int64)
    hi = np.array(np.broadcast_to(hi, lo.shape), dtype=np.int64)
    while True:
        act = lo < hi
        if not act.any():
            return lo
        mid = (lo + hi) >> 1
        p = pred(np.where(act, mid, 0))
        hi = np.where(act & p, mid, hi)
        lo = np.where(act & ~p, mid + 1, lo)


def window_counts(xs: np.ndarray, centers: np.ndarray, radius: float) -> np.ndarray:
    """Number of sorted points ``xs`` with ``torus_dist(x, c) <= radius``.

    Along the circle starting at ``c`` the computed ``|x - c|`` is monotone on
    each side of ``c`` (rounding is monotone), so four bisections on the exact
    predicate reproduce a brute-force count exactly.
    """
    n = xs.size
    centers = np.asarray(centers, dtype=np.float64)
    if radius >= 0.5:
        return np.full(centers.shape, n, dtype=np.int64)
    r = float(radius)
    pos = np.searchsorted(xs, centers, side="left").astype(np.int64)

    def u(idx):
        return np.abs(xs[np.minimum(idx, n - 1)] - centers)

    # points at or after c: u grows with the index
    a1 = _first_true(lambda i: u(i) > r, pos, n)
    b1 = _first_true(lambda i: (1.0 - u(i)) <= r, pos, n)
    # points before c: u shrinks with the index
    zero = np.zeros_like(pos)
    a2 = _first_true(lambda i: (1.0 - u(i)) > r, zero, pos)
    b2 = _first_true(lambda i: u(i) <= r, zero, pos)
    return (a1 - pos) + (n - b1) + a2 + (pos - b2)


def candidate_ranges(xs: np.ndarray, centers: np.ndarray, radius: float):
    """Start offsets and lengths (in circular sorted order) of points that
    may lie within ``radius`` of each centre; a superset of the true window."""
    n = xs.size
    centers = np.asarray(centers, dtype=np.float64)
    if radius + SLACK >= 0.5:
        return np.zeros(centers.shape, np.int64), np.full(centers.shape, n, np.int64)
    left = centers - radius - SLACK
    right = centers + radius + SLACK
    fl = np.floor(left)
    fr = np.floor(right)
    lo = fl.astype(np.int64) * n + np.searchsorted(xs, left - fl, side="left")
    hi = fr.astype(np.int64) * n + np.searchsorted(xs, right - fr, side="right")
    return lo, np.clip(hi - lo, 0, n)


def pair_chunks(xs: np.ndarray, radius: float, budget: int = PAIR_BUDGET):
    """Chunks of candidate ordered pairs between distinct sorted positions.

    Yields ``(start, stop, anchor, other)`` where ``anchor`` and ``other`` are
    sorted positions, ``start <= anchor < stop``; pairs of one anchor never
    straddle two chunks and appear in increasing circular order.
    """
    n = xs.size
    lo, length = candidate_ranges(xs, xs, radius)
    cum = np.cumsum(length)
    start = 0
    while start < n:
        base = cum[start - 1] if start else 0
        stop = int(np.searchsorted(cum, base + budget, side="right"))
        stop = min(max(stop, start + 1), n)
        anchors = np.arange(start, stop, dtype=np.int64)
        lens = length[start:stop]
        total = int(lens.sum())
        anchor = np.repeat(anchors, lens)
        offs = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lens) - lens, lens)
        other = (np.repeat(lo[start:stop], lens) + offs) % n
        keep = other != anchor
        yield start, stop, anchor[keep], other[keep]
        start = stop


@lru_cache(maxsize=None)
def set_partitions(items: tuple):
    """All set partitions of ``items`` as tuples of blocks."""
    if not items:
        return ((),)
    first, rest = items[0], items[1:]
    out = []
    for part in set_partitions(rest):
        out.append(((first,),) + part)
        for i in range(len(part)):
            out.append(part[:i] + ((first,) + part[i],) + part[i + 1:])
    return tuple(out)


def _mobius(part) -> int:
    c = 1
    for block in part:
        m = len(block)
        c *= (-1) ** (m - 1) * math.factorial(m - 1)
    return c


def injective_sum(slots, block_sum):
    """Sum over injective assignments of ``slots`` to indices of
    ``prod_l w_l(j_l)``, given ``block_sum(B) = sum_j prod_{l in B} w_l(j)``.

    Moebius inversion on the partition lattice; exact for integer weights.
    ``block_sum`` results may be scalars or per-anchor arrays.
    """
    slots = tuple(slots)
    if not slots:
        return 1
    cache = {}

    def bs(block):
        if block not in cache:
            cache[block] = block_sum(block)
        return cache[block]

    total = 0
    for part in set_partitions(slots):
        term = _mobius(part)
        for block in part:
            term = term * bs(block)
        total = total + term
    return total
