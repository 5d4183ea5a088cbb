"""Arithmetic on the unit torus R/Z.

Scalar functions accept Python floats; the ``*_array`` variants are the
elementwise numpy versions and perform the identical IEEE operations, so a
scalar and a vectorized evaluation of the same distance always agree bit for
bit. The counting kernels rely on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _check_finite(x):
    if not math.isfinite(x):
        raise DomainError(f"expected a finite real, got {x!r}")


def frac(x: float) -> float:
    """Fractional part ``x - floor(x)``, always in ``[0, 1)``."""
    x = float(x)
    _check_finite(x)
    f = x - math.floor(x)
    # -1e-20 - floor(-1e-20) rounds to 1.0
    return 0.0 if f >= 1.0 else f


def signed_nearest(x: float) -> float:
    """Signed distance to the nearest integer, in ``[-1/2, 1/2)``.

    At ``{x} = 1/2`` the value is ``-1/2``.
    """
    f = frac(x)
    return f if f < 0.5 else f - 1.0


def torus_dist(x: float, y: float) -> float:
    """Distance ``||x - y||`` on the circle of circumference 1.

    Computed from ``|x - y|`` so the result is exactly symmetric in its
    arguments.
    """
    x = float(x)
    y = float(y)
    _check_finite(x)
    _check_finite(y)
    a = abs(x - y)
    u = a - math.floor(a)
    return min(u, 1.0 - u)


def arc_overlap(x: float, r1: float, y: float, r2: float) -> float:
    """Lebesgue measure of ``B(x, r1) ∩ B(y, r2)`` on the torus."""
    if r1 < 0 or r2 < 0:
        raise DomainError(f"radii must be nonnegative, got {r1!r}, {r2!r}")
    d = torus_dist(x, y)
    p1 = min(float(r1), 0.5)
    p2 = min(float(r2), 0.5)
    both = p1 + p2
    return min(2.0 * p1, 2.0 * p2, max(both - d, 0.0) + max(both - (1.0 - d), 0.0), 1.0)


def frac_array(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise DomainError("expected finite reals")
    f = x - np.floor(x)
    f[f >= 1.0] = 0.0
    return f


def signed_nearest_array(x) -> np.ndarray:
    f = frac_array(x)
    return np.where(f < 0.5, f, f - 1.0)


def torus_dist_array(x, y) -> np.ndarray:
    """Elementwise (broadcasting) version of :func:`torus_dist`."""
    a = np.abs(np.subtract(x, y, dtype=np.float64))
    u = a - np.floor(a)
    return np.minimum(u, 1.0 - u)


def arc_overlap_array(x, r1, y, r2) -> np.ndarray:
    """Broadcasting version of :func:`arc_overlap`."""
    r1 = np.asarray(r1, dtype=np.float64)
    r2 = np.asarray(r2, dtype=np.float64)
    if np.any(r1 < 0) or np.any(r2 < 0):
        raise DomainError("radii must be nonnegative")
    d = torus_dist_array(x, y)
    p1 = np.minimum(r1, 0.5)
    p2 = np.minimum(r2, 0.5)
    both = p1 + p2
    wrap = np.maximum(both - d, 0.0) + np.maximum(both - (1.0 - d), 0.0)
    return np.minimum(np.minimum(2.0 * p1, 2.0 * p2), np.minimum(wrap, 1.0))


@dataclass(frozen=True)
class UnitPoint:
    """A torus coordinate; any real input is reduced into ``[0, 1)``."""

    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", frac(self.value))

    def __float__(self):
        return self.value
