"""Example sequences on [0, 1) and the point file format.

Random draws come from numpy's PCG64 bit generator seeded directly with the
64-bit seed; points are ``Generator.random`` doubles taken from stream 0 in
order, so a length-N sample is always the prefix of any longer sample with
the same seed.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import DomainError, ParseError
from .torus import frac_array

RNG_NAME = "numpy.PCG64/stream0"

ALPHA_TOKENS = {
    "sqrt2": math.sqrt(2.0),
    "sqrt2_over_5": math.sqrt(2.0) / 5.0,
    "golden": (1.0 + math.sqrt(5.0)) / 2.0,
}

KINDS = ("kronecker", "van_der_corput", "uniform_random", "file")


def parse_alpha(text) -> float:
    """Accept a decimal literal or one of ``sqrt2``, ``sqrt2_over_5``, ``golden``."""
    if isinstance(text, (int, float)):
        alpha = float(text)
    elif text in ALPHA_TOKENS:
        alpha = ALPHA_TOKENS[text]
    else:
        try:
            alpha = float(text)
        except ValueError:
            raise DomainError(
                f"alpha must be a decimal or one of {sorted(ALPHA_TOKENS)}, got {text!r}"
            ) from None
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {text!r}")
    return alpha


@dataclass(frozen=True)
class SequenceSpec:
    """Declarative description of a sequence family.

    Use the constructors :meth:`kronecker`, :meth:`van_der_corput`,
    :meth:`uniform_random` and :meth:`file` rather than filling fields by hand.
    """

    kind: str
    alpha: Optional[float] = None
    alpha_token: Optional[str] = None
    base: Optional[int] = None
    include_zero: bool = False
    seed: Optional[int] = None
    path: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown sequence kind {self.kind!r}")
        if self.kind == "kronecker" and (self.alpha is None or not math.isfinite(self.alpha)):
            raise DomainError("kronecker needs a finite alpha")
        if self.kind == "van_der_corput":
            if self.base is None or int(self.base) != self.base or self.base < 2:
                raise DomainError(f"van der Corput base must be an integer >= 2, got {self.base!r}")
        if self.kind == "uniform_random":
            if self.seed is None or not 0 <= int(self.seed) < 2**64:
                raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.kind == "file" and not self.path:
            raise DomainError("file kind needs a path")

    @classmethod
    def kronecker(cls, alpha) -> "SequenceSpec":
        token = alpha if isinstance(alpha, str) and alpha in ALPHA_TOKENS else None
        return cls("kronecker", alpha=parse_alpha(alpha), alpha_token=token)

    @classmethod
    def van_der_corput(cls, base: int = 2, include_zero: bool = False) -> "SequenceSpec":
        return cls("van_der_corput", base=base, include_zero=bool(include_zero))

    @classmethod
    def uniform_random(cls, seed: int) -> "SequenceSpec":
        return cls("uniform_random", seed=int(seed))

    @classmethod
    def file(cls, path) -> "SequenceSpec":
        return cls("file", path=str(path))

    def describe(self) -> dict:
        """Plain-dict form used in report metadata."""
        if self.kind == "kronecker":
            return {"kind": self.kind, "alpha": self.alpha_token or repr(self.alpha)}
        if self.kind == "van_der_corput":
            return {"kind": self.kind, "base": self.base, "include_zero": self.include_zero}
        if self.kind == "uniform_random":
            return {"kind": self.kind, "seed": self.seed, "rng": RNG_NAME}
        return {"kind": self.kind, "path": self.path}


class PointSet:
    """An immutable, ordered list of points in ``[0, 1)``.

    ``points[i]`` is ``x_{i+1}`` in one-based sequence indexing. The sorted view (a
    permutation of indices ordering the points ascending) is built on first
    use under a lock, so a PointSet can be shared between threads.
    """

    def __init__(self, points):
        arr = np.array(points, dtype=np.float64).reshape(-1)
        if arr.size < 1:
            raise DomainError("a point set needs at least one point")
        if not np.all(np.isfinite(arr)):
            raise DomainError("points must be finite")
        if np.any(arr < 0.0) or np.any(arr >= 1.0):
            arr = frac_array(arr)
        arr.setflags(write=False)
        self._points = arr
        self._order = None
        self._sorted = None
        self._lock = threading.Lock()

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return int(self._points.size)

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"PointSet(n={self.n})"

    def _build(self):
        with self._lock:
            if self._order is None:
                order = np.argsort(self._points, kind="stable")
                srt = self._points[order]
                order.setflags(write=False)
                srt.setflags(write=False)
                self._sorted = srt
                self._order = order

    @property
    def sorted_view(self) -> np.ndarray:
        """Indices that sort the points ascending (stable for ties)."""
        if self._order is None:
            self._build()
        return self._order

    @property
    def sorted_points(self) -> np.ndarray:
        if self._sorted is None:
            self._build()
        return self._sorted

    def prefix(self, n: int) -> "PointSet":
        if not 1 <= n <= self.n:
            raise DomainError(f"prefix length {n} outside [1, {self.n}]")
        return PointSet(self._points[:n])


def radical_inverse(indices, base: int) -> np.ndarray:
    """Digit-reversal ``g_b(n)`` for an array of nonnegative integers.

    The reversed digits are accumulated as an integer numerator and divided
    once by ``b**m``, so every value is the double nearest to the exact
    rational (exact for base 2).
    """
    out = np.empty(len(indices), dtype=np.float64)
    for i, n in enumerate(int(v) for v in indices):
        num = 0
        den = 1
        while n > 0:
            n, digit = divmod(n, base)
            num = num * base + digit
            den *= base
        out[i] = num / den
    return out


def generate(spec: SequenceSpec, n: int) -> PointSet:
    """First ``n`` points of the sequence described by ``spec``."""
    if int(n) != n or n < 1:
        raise DomainError(f"N must be a positive integer, got {n!r}")
    n = int(n)
    if spec.kind == "kronecker":
        pts = frac_array(np.arange(1, n + 1, dtype=np.float64) * spec.alpha)
    elif spec.kind == "van_der_corput":
        start = 0 if spec.include_zero else 1
        pts = radical_inverse(range(start, start + n), spec.base)
    elif spec.kind == "uniform_random":
        rng = np.random.Generator(np.random.PCG64(spec.seed))
        pts = rng.random(n)
    else:
        loaded = load(spec.path)
        if loaded.n < n:
            raise DomainError(f"{spec.path} holds {loaded.n} points, {n} requested")
        return loaded.prefix(n)
    return PointSet(pts)


def load(path) -> PointSet:
    """Read a point file: one decimal per line, ``#`` comments, blank lines ignored."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        rec = line.strip()
        if not rec or rec.startswith("#"):
            continue
        try:
            v = float(rec)
        except ValueError:
            raise ParseError(str(path), lineno, rec) from None
        if not math.isfinite(v):
            raise ParseError(str(path), lineno, rec)
        values.append(v)
    if not values:
        raise DomainError(f"{path} contains no points")
    return PointSet(frac_array(values))


def format_points(points: PointSet) -> str:
    """Serialize in the point file format (shortest round-trip decimals)."""
    return "".join(f"{float(v)!r}\n" for v in points.points)
