"""Exact continuous piecewise-affine functions of one variable on [0, inf).

These are the values of a piecewise-affine map along a ray ``t -> base + t d``:
every coordinate becomes a ``PwaFunction1D`` and the constructors of a map
(sums, scalings, pointwise max/min) act on them exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceLimitError
from .exact import ZERO, frac

#: maximum number of pieces any intermediate function may have
PIECE_CAP = 10**6


@dataclass(frozen=True)
class PwaFunction1D:
    """Pieces ``[starts[k], starts[k+1])`` with value ``slopes[k] t + intercepts[k]``.

    ``starts[0]`` is 0 and the last piece extends to infinity.
    """

    starts: tuple
    slopes: tuple
    intercepts: tuple

    def __post_init__(self):
        if not self.starts or self.starts[0] != 0:
            raise ValueError("first piece must start at 0")
        if not (len(self.starts) == len(self.slopes) == len(self.intercepts)):
            raise ValueError("inconsistent piece data")
        for k in range(1, len(self.starts)):
            t = self.starts[k]
            if t <= self.starts[k - 1]:
                raise ValueError("breakpoints must increase")
            if self.slopes[k - 1] * t + self.intercepts[k - 1] != self.slopes[k] * t + self.intercepts[k]:
                raise ValueError(f"discontinuity at t = {t}")

    @classmethod
    def affine(cls, slope=0, intercept=0) -> PwaFunction1D:
        return cls((ZERO,), (frac(slope),), (frac(intercept),))

    @classmethod
    def constant(cls, c) -> PwaFunction1D:
        return cls.affine(0, c)

    @property
    def breakpoints(self) -> tuple:
        return self.starts

    @property
    def piece_count(self) -> int:
        return len(self.starts)

    @property
    def final_slope(self) -> Fraction:
        return self.slopes[-1]

    @property
    def final_intercept(self) -> Fraction:
        return self.intercepts[-1]

    @property
    def initial_slope(self) -> Fraction:
        return self.slopes[0]

    def _piece(self, t) -> int:
        k = 0
        for j, s in enumerate(self.starts):
            if s <= t:
                k = j
            else:
                break
        return k

    def __call__(self, t):
        if t < 0:
            raise ValueError("defined for t >= 0 only")
        k = self._piece(t)
        return self.slopes[k] * t + self.intercepts[k]

    # -- arithmetic ----------------------------------------------------------

    def _map(self, fn) -> PwaFunction1D:
        pieces = [fn(s, c) for s, c in zip(self.slopes, self.intercepts)]
        return _build(list(self.starts), pieces)

    def __add__(self, other):
        if isinstance(other, PwaFunction1D):
            return combine(self, other, lambda a, b: (a[0] + b[0], a[1] + b[1]))
        c = frac(other)
        return self._map(lambda s, i: (s, i + c))

    __radd__ = __add__

    def __neg__(self):
        return self._map(lambda s, i: (-s, -i))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, PwaFunction1D):
            return NotImplemented
        c = frac(c)
        return self._map(lambda s, i: (c * s, c * i))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / frac(c))

    def is_nonincreasing(self) -> bool:
        return all(s <= 0 for s in self.slopes)


def _build(starts, pieces) -> PwaFunction1D:
    """Assemble pieces, merging neighbours carrying the same affine function."""
    out_s, out_p = [], []
    for t, p in zip(starts, pieces):
        if out_p and out_p[-1] == p:
            continue
        out_s.append(t)
        out_p.append(p)
    if len(out_s) > PIECE_CAP:
        raise ResourceLimitError(f"piece count {len(out_s)} exceeds cap {PIECE_CAP}")
    return PwaFunction1D(tuple(out_s), tuple(p[0] for p in out_p), tuple(p[1] for p in out_p))


def _intervals(f: PwaFunction1D, g: PwaFunction1D):
    """Common refinement: yields (start, end or None, piece of f, piece of g)."""
    cuts = sorted(set(f.starts) | set(g.starts))
    i = j = 0
    for k, t in enumerate(cuts):
        while i + 1 < len(f.starts) and f.starts[i + 1] <= t:
            i += 1
        while j + 1 < len(g.starts) and g.starts[j + 1] <= t:
            j += 1
        end = cuts[k + 1] if k + 1 < len(cuts) else None
        yield t, end, (f.slopes[i], f.intercepts[i]), (g.slopes[j], g.intercepts[j])


def combine(f: PwaFunction1D, g: PwaFunction1D, op) -> PwaFunction1D:
    """Apply an affine-to-affine binary ``op`` piecewise on the common refinement."""
    starts, pieces = [], []
    for t, _, a, b in _intervals(f, g):
        starts.append(t)
        pieces.append(op(a, b))
    return _build(starts, pieces)


def _extremum(f: PwaFunction1D, g: PwaFunction1D, take_max: bool) -> PwaFunction1D:
    starts, pieces = [], []
    for lo, hi, a, b in _intervals(f, g):
        if a == b:
            starts.append(lo)
            pieces.append(a)
            continue
        cut = None
        if a[0] != b[0]:
            x = (b[1] - a[1]) / (a[0] - b[0])
            if lo < x and (hi is None or x < hi):
                cut = x
        segs = [(lo, hi)] if cut is None else [(lo, cut), (cut, hi)]
        for s, e in segs:
            # compare at an interior point of the segment
            probe = s + 1 if e is None else (s + e) / 2
            va = a[0] * probe + a[1]
            vb = b[0] * probe + b[1]
            starts.append(s)
            pieces.append(a if (va >= vb) == take_max else b)
    return _build(starts, pieces)


def pwa_max(f, g):
    if not isinstance(f, PwaFunction1D):
        f = PwaFunction1D.constant(f)
    if not isinstance(g, PwaFunction1D):
        g = PwaFunction1D.constant(g)
    return _extremum(f, g, True)


def pwa_min(f, g):
    if not isinstance(f, PwaFunction1D):
        f = PwaFunction1D.constant(f)
    if not isinstance(g, PwaFunction1D):
        g = PwaFunction1D.constant(g)
    return _extremum(f, g, False)
