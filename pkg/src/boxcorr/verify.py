"""Numerical theorem checks assembled from the statistics modules.

Each check returns an :class:`ExperimentReport` whose verdict is a declared
threshold predicate over its rows. These are numerical evidence at finite N,
not proofs.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from .correlations import CorrelationQuery, r_stat
from .errors import DomainError
from .integral import gh_expansion_limit, gh_integral_closed, phi
from .sequences import PointSet, SequenceSpec, generate

SAFETY = 7.0


@dataclass
class Row:
    n: int
    observed: float
    target: float
    abs_error: float
    s: Optional[tuple] = None

    def as_dict(self):
        d = {"N": self.n, "observed": self.observed, "target": self.target, "abs_error": self.abs_error}
        if self.s is not None:
            d["s"] = list(self.s)
        return d


@dataclass
class ExperimentReport:
    experiment: str
    rows: List[Row]
    verdict: bool
    predicate: str
    metadata: dict = field(default_factory=dict)
    timing: Optional[float] = None

    def as_dict(self, include_timing: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "rows": [r.as_dict() for r in self.rows],
            "verdict": "pass" if self.verdict else "fail",
            "predicate": self.predicate,
            "metadata": self.metadata,
        }
        if include_timing:
            out["timing"] = self.timing
        return out


def default_tolerance(q: CorrelationQuery, n: int) -> float:
    """Fluctuation-scaled tolerance for a convergence check at sample size n.

    beta = 1: ``7 * sqrt(target / N)`` (Poisson count scale); beta < 1:
    ``7 * target * log(N) / N^(1-beta)``.
    """
    if q.beta == 1.0:
        return SAFETY * math.sqrt(q.target / n)
    return SAFETY * q.target * math.log(n) / n ** (1.0 - q.beta)


def _source(spec, n):
    if isinstance(spec, SequenceSpec):
        return generate(spec, n)
    if spec.n < n:
        raise DomainError(f"point set has {spec.n} points, grid needs {n}")
    return spec


def _meta(spec, q, grid, extra=None):
    m = {"spec": spec.describe() if isinstance(spec, SequenceSpec) else {"kind": "points", "n": spec.n},
         "query": q.describe() if q is not None else None,
         "grid": list(grid)}
    if extra:
        m.update(extra)
    return m


def _check_grid(grid):
    grid = [int(g) for g in grid]
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be nonempty and strictly increasing")
    return grid


def check_box_convergence(spec, q: CorrelationQuery, grid: Sequence[int], tol: Optional[float] = None,
                          threads=None) -> ExperimentReport:
    start = time.perf_counter()
    grid = _check_grid(grid)
    if tol is None:
        tol = default_tolerance(q, grid[-1])
    full = _source(spec, grid[-1])
    rows = []
    for n in grid:
        res = r_stat(full.prefix(n), q, threads=threads)
        rows.append(Row(n, res.normalized, res.target, res.abs_error))
    return ExperimentReport(
        "box-convergence", rows, rows[-1].abs_error <= tol,
        f"abs_error at N={grid[-1]} <= {tol!r}", _meta(spec, q, grid, {"tol": tol}),
        time.perf_counter() - start,
    )


def gh_target(q: CorrelationQuery, rule: str = "phi") -> float:
    """Limit of the G*H integral: ``prod s^2`` for beta < 1; at beta = 1 either
    ``phi(s)`` or the limit read off the exact expansion."""
    if q.beta < 1.0:
        return math.prod(v * v for v in q.s)
    if rule == "phi":
        return phi(q.s)
    if rule == "expansion":
        return gh_expansion_limit(q.s)
    raise DomainError(f"unknown target rule {rule!r}")


def check_gh_limit(spec, q: CorrelationQuery, grid: Sequence[int], tol: float, target_rule: str = "phi",
                   threads=None) -> ExperimentReport:
    """For k = 2 both target rules coincide; for k >= 3 at beta = 1 the
    exact expansion converges to ``gh_expansion_limit`` on Poissonian input,
    which differs from ``phi``."""
    start = time.perf_counter()
    grid = _check_grid(grid)
    target = gh_target(q, target_rule)
    full = _source(spec, grid[-1])
    rows = []
    for n in grid:
        v = gh_integral_closed(full.prefix(n), q, threads=threads)
        rows.append(Row(n, v, target, abs(v - target)))
    return ExperimentReport(
        "gh-limit", rows, rows[-1].abs_error <= tol,
        f"abs_error at N={grid[-1]} <= {tol!r}",
        _meta(spec, q, grid, {"tol": tol, "target_rule": target_rule}),
        time.perf_counter() - start,
    )


def check_non_convergence(spec, k: int, s_grid: Sequence[float], n_grid: Sequence[int],
                          dev_threshold: float = 0.15, tail_fraction: float = 0.5,
                          threads=None) -> ExperimentReport:
    """Search ``s_grid`` for a window whose ``(k,1)`` statistic stays at least
    ``dev_threshold`` away from its target on every N of the grid tail.

    The tail is the last ``ceil(tail_fraction * len(n_grid))`` grid points.
    Passes iff such a witness exists; rows carry every evaluated (s, N).
    """
    start = time.perf_counter()
    n_grid = _check_grid(n_grid)
    if not 0 < tail_fraction <= 1:
        raise DomainError("tail_fraction must lie in (0, 1]")
    s_grid = [float(v) for v in s_grid]
    if not s_grid:
        raise DomainError("s_grid must not be empty")
    tail = n_grid[len(n_grid) - math.ceil(tail_fraction * len(n_grid)):]
    full = _source(spec, n_grid[-1])
    rows = []
    witnesses = []
    for s in s_grid:
        q = CorrelationQuery.make((s,) * (k - 1), beta=1.0)
        persistent = True
        for n in n_grid:
            res = r_stat(full.prefix(n), q, threads=threads)
            rows.append(Row(n, res.normalized, res.target, res.abs_error, s=q.s))
            if n in tail and res.abs_error < dev_threshold:
                persistent = False
        if persistent:
            witnesses.append(s)
    return ExperimentReport(
        "non-convergence", rows, bool(witnesses),
        f"exists s with abs_error >= {dev_threshold!r} for every N in {tail}",
        _meta(spec, None, n_grid, {"k": k, "beta": 1.0, "s_grid": s_grid, "dev_threshold": dev_threshold,
                                   "tail": tail, "witnesses": witnesses}),
        time.perf_counter() - start,
    )
