"""Expression trees for maps R^n -> R^n built from nonexpansive constructors.

Every node can be evaluated in three modes:

``exact``
    rational input, rational output (piecewise-affine fragment only);
``float``
    numpy float vectors, used by the iteration oracle;
``ray``
    coordinates are :class:`~nexcert.pwa.PwaFunction1D` of the ray parameter,
    which is how ray restrictions are computed exactly.

Structural flags (``pwa``, ``order_preserving``, ``topical``, ``subtopical``,
``convex``, ``homogeneous``) are derived bottom-up from closure rules.  They are
conservative: a map may have a property without the flag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError, MalformedMapError, NotPiecewiseAffineError
from .exact import ONE, ZERO, frac, is_rational_vector, sub, vec
from .polynorm import PolyhedralNorm
from .pwa import PwaFunction1D, pwa_max, pwa_min

BOT = None  # bottom entry of a max-plus matrix (minus infinity)


def _is_pwa(v):
    return isinstance(v, PwaFunction1D)


def _max(a, b):
    if _is_pwa(a) or _is_pwa(b):
        return pwa_max(a, b)
    return a if a >= b else b


def _min(a, b):
    if _is_pwa(a) or _is_pwa(b):
        return pwa_min(a, b)
    return a if a <= b else b


def _linear_sum(terms, start):
    return reduce(lambda acc, t: acc + t, terms, start)


def _entry(value):
    if value is None or (isinstance(value, str) and value.strip().lower() in ("bot", "-inf")):
        return BOT
    return frac(value)


class MapExpr:
    """Base class; concrete constructors are the subclasses below."""

    dim: int

    # flags, overridden by subclasses
    pwa = True
    order_preserving = False
    topical = False
    subtopical = False
    convex = False
    homogeneous = False
    affine = False

    def children(self) -> tuple:
        return ()

    def _eval(self, x, mode: str):
        raise NotImplementedError

    def _linear_matrix(self):
        """Exact matrix when the node is linear, else None."""
        return None

    def _nonexpansive_in(self, norm: PolyhedralNorm) -> bool:
        return False

    def recession(self) -> MapExpr:
        """Symbolic recession map ``x -> lim f(t x) / t``."""
        raise NotPiecewiseAffineError(f"no closed-form recession map for {type(self).__name__}")

    def to_dict(self) -> dict:
        raise NotImplementedError

    def __call__(self, x):
        return evaluate(self, x)

    def structurally_nonexpansive(self, norm: PolyhedralNorm) -> bool:
        if norm.dimension != self.dim:
            return False
        if norm.kind == "sup" and self.subtopical:
            return True
        lin = self._linear_matrix()
        if lin is not None:
            return operator_norm(lin, norm) <= 1
        return self._nonexpansive_in(norm)


def operator_norm(matrix, norm: PolyhedralNorm) -> Fraction:
    """Exact operator norm of a square rational matrix in a polyhedral norm."""
    best = ZERO
    for y in norm.primal_vertices:
        img = tuple(sum((a * b for a, b in zip(row, y)), ZERO) for row in matrix)
        best = max(best, norm.value(img))
    return best


def _identity_matrix(n):
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


@dataclass(frozen=True, eq=False)
class Identity(MapExpr):
    dim: int
    order_preserving = topical = subtopical = convex = homogeneous = affine = True

    def _eval(self, x, mode):
        return x.copy() if mode == "float" else list(x)

    def _linear_matrix(self):
        return _identity_matrix(self.dim)

    def recession(self):
        return self

    def to_dict(self):
        return {"op": "identity", "n": self.dim}


@dataclass(frozen=True, eq=False)
class Constant(MapExpr):
    value: tuple
    order_preserving = subtopical = convex = affine = True

    def __post_init__(self):
        object.__setattr__(self, "value", vec(self.value))

    @property
    def dim(self):
        return len(self.value)

    @property
    def homogeneous(self):
        return all(v == 0 for v in self.value)

    @cached_property
    def _fv(self):
        return np.array([float(v) for v in self.value])

    def _eval(self, x, mode):
        return self._fv.copy() if mode == "float" else list(self.value)

    def _nonexpansive_in(self, norm):
        return True

    def recession(self):
        return Constant((ZERO,) * self.dim)

    def to_dict(self):
        return {"op": "constant", "value": [str(v) for v in self.value]}


@dataclass(frozen=True, eq=False)
class Permutation(MapExpr):
    """``S(x)_i = x_{sigma(i)}``."""

    sigma: tuple
    order_preserving = topical = subtopical = convex = homogeneous = affine = True

    def __post_init__(self):
        sigma = tuple(int(s) for s in self.sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise MalformedMapError(f"{sigma} is not a permutation")
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self):
        return len(self.sigma)

    def _eval(self, x, mode):
        if mode == "float":
            return x[list(self.sigma)]
        return [x[s] for s in self.sigma]

    def _linear_matrix(self):
        n = self.dim
        return tuple(tuple(ONE if j == self.sigma[i] else ZERO for j in range(n)) for i in range(n))

    def recession(self):
        return self

    def to_dict(self):
        return {"op": "permutation", "sigma": list(self.sigma)}


@dataclass(frozen=True, eq=False)
class SignFlip(MapExpr):
    """Negate the coordinates in ``flip``."""

    dim: int
    flip: frozenset
    convex = homogeneous = affine = True

    def __post_init__(self):
        flip = frozenset(int(i) for i in self.flip)
        if any(not 0 <= i < self.dim for i in flip):
            raise MalformedMapError("sign-flip index out of range")
        object.__setattr__(self, "flip", flip)

    @property
    def order_preserving(self):
        return not self.flip

    topical = subtopical = order_preserving

    @cached_property
    def _signs(self):
        return np.array([-1.0 if i in self.flip else 1.0 for i in range(self.dim)])

    def _eval(self, x, mode):
        if mode == "float":
            return x * self._signs
        return [-v if i in self.flip else v for i, v in enumerate(x)]

    def _linear_matrix(self):
        n = self.dim
        return tuple(
            tuple((-ONE if i in self.flip else ONE) if i == j else ZERO for j in range(n))
            for i in range(n)
        )

    def recession(self):
        return self

    def to_dict(self):
        return {"op": "signflip", "n": self.dim, "flip": sorted(self.flip)}


@dataclass(frozen=True, eq=False)
class Clip(MapExpr):
    """``max(x_i, 0)`` on ``clip``, ``x_i`` on ``keep``, 0 on the rest."""

    dim: int
    clip: frozenset
    keep: frozenset = frozenset()
    order_preserving = subtopical = convex = homogeneous = True

    def __post_init__(self):
        clip = frozenset(int(i) for i in self.clip)
        keep = frozenset(int(i) for i in self.keep)
        if clip & keep:
            raise MalformedMapError("clip and keep sets overlap")
        if any(not 0 <= i < self.dim for i in clip | keep):
            raise MalformedMapError("clip index out of range")
        object.__setattr__(self, "clip", clip)
        object.__setattr__(self, "keep", keep)

    @property
    def topical(self):
        return not self.clip and len(self.keep) == self.dim

    @cached_property
    def _masks(self):
        c = np.array([i in self.clip for i in range(self.dim)])
        k = np.array([i in self.keep for i in range(self.dim)])
        return c, k

    def _eval(self, x, mode):
        if mode == "float":
            c, k = self._masks
            return np.where(c, np.maximum(x, 0.0), np.where(k, x, 0.0))
        out = []
        for i, v in enumerate(x):
            if i in self.clip:
                out.append(_max(v, ZERO))
            elif i in self.keep:
                out.append(v)
            else:
                out.append(ZERO)
        return out

    def _nonexpansive_in(self, norm):
        return norm.kind in ("sup", "one")

    def recession(self):
        return self

    def to_dict(self):
        return {"op": "clip", "n": self.dim, "clip": sorted(self.clip), "keep": sorted(self.keep)}


@dataclass(frozen=True, eq=False)
class Translate(MapExpr):
    """``x -> x + shift``."""

    shift: tuple
    order_preserving = topical = subtopical = convex = affine = True

    def __post_init__(self):
        object.__setattr__(self, "shift", vec(self.shift))

    @property
    def dim(self):
        return len(self.shift)

    @property
    def homogeneous(self):
        return all(v == 0 for v in self.shift)

    @cached_property
    def _fv(self):
        return np.array([float(v) for v in self.shift])

    def _eval(self, x, mode):
        if mode == "float":
            return x + self._fv
        return [a + b for a, b in zip(x, self.shift)]

    def _nonexpansive_in(self, norm):
        return True

    def recession(self):
        return Identity(self.dim)

    def to_dict(self):
        return {"op": "translate", "shift": [str(v) for v in self.shift]}


@dataclass(frozen=True, eq=False)
class Compose(MapExpr):
    """``outer(inner(x))``."""

    outer: MapExpr
    inner: MapExpr

    def __post_init__(self):
        if self.outer.dim != self.inner.dim:
            raise DimensionError("composition of maps with different dimensions")

    @property
    def dim(self):
        return self.inner.dim

    def children(self):
        return (self.outer, self.inner)

    @property
    def pwa(self):
        return self.outer.pwa and self.inner.pwa

    @property
    def order_preserving(self):
        return self.outer.order_preserving and self.inner.order_preserving

    @property
    def topical(self):
        return self.outer.topical and self.inner.topical

    @property
    def subtopical(self):
        return self.outer.subtopical and self.inner.subtopical

    @property
    def convex(self):
        o, i = self.outer, self.inner
        return (i.affine and o.convex) or (o.convex and o.order_preserving and i.convex)

    @property
    def homogeneous(self):
        return self.outer.homogeneous and self.inner.homogeneous

    @property
    def affine(self):
        return self.outer.affine and self.inner.affine

    def _eval(self, x, mode):
        return self.outer._eval(self.inner._eval(x, mode), mode)

    def _nonexpansive_in(self, norm):
        return self.outer.structurally_nonexpansive(norm) and self.inner.structurally_nonexpansive(norm)

    def recession(self):
        return Compose(self.outer.recession(), self.inner.recession())

    def to_dict(self):
        return {"op": "compose", "maps": [self.outer.to_dict(), self.inner.to_dict()]}


def compose(*maps: MapExpr) -> MapExpr:
    """``compose(f, g, h)`` is ``f o g o h``."""
    if not maps:
        raise ValueError("nothing to compose")
    return reduce(lambda acc, g: Compose(acc, g), maps)


class _Binary(MapExpr):
    a: MapExpr
    b: MapExpr

    def __post_init__(self):
        if self.a.dim != self.b.dim:
            raise DimensionError("operands have different dimensions")

    @property
    def dim(self):
        return self.a.dim

    def children(self):
        return (self.a, self.b)

    @property
    def pwa(self):
        return self.a.pwa and self.b.pwa

    @property
    def order_preserving(self):
        return self.a.order_preserving and self.b.order_preserving

    @property
    def topical(self):
        return self.a.topical and self.b.topical

    @property
    def subtopical(self):
        return self.a.subtopical and self.b.subtopical

    @property
    def homogeneous(self):
        return self.a.homogeneous and self.b.homogeneous


@dataclass(frozen=True, eq=False)
class PointwiseMax(_Binary):
    a: MapExpr
    b: MapExpr

    @property
    def convex(self):
        return self.a.convex and self.b.convex

    def _eval(self, x, mode):
        u, v = self.a._eval(x, mode), self.b._eval(x, mode)
        if mode == "float":
            return np.maximum(u, v)
        return [_max(p, q) for p, q in zip(u, v)]

    def _nonexpansive_in(self, norm):
        return norm.kind == "sup" and self.a.structurally_nonexpansive(norm) and self.b.structurally_nonexpansive(norm)

    def recession(self):
        return PointwiseMax(self.a.recession(), self.b.recession())

    def to_dict(self):
        return {"op": "max", "args": [self.a.to_dict(), self.b.to_dict()]}


@dataclass(frozen=True, eq=False)
class PointwiseMin(_Binary):
    a: MapExpr
    b: MapExpr

    def _eval(self, x, mode):
        u, v = self.a._eval(x, mode), self.b._eval(x, mode)
        if mode == "float":
            return np.minimum(u, v)
        return [_min(p, q) for p, q in zip(u, v)]

    def _nonexpansive_in(self, norm):
        return norm.kind == "sup" and self.a.structurally_nonexpansive(norm) and self.b.structurally_nonexpansive(norm)

    def recession(self):
        return PointwiseMin(self.a.recession(), self.b.recession())

    def to_dict(self):
        return {"op": "min", "args": [self.a.to_dict(), self.b.to_dict()]}


@dataclass(frozen=True, eq=False)
class ConvexCombination(_Binary):
    """``weight * a + (1 - weight) * b`` with ``0 <= weight <= 1``."""

    a: MapExpr
    b: MapExpr
    weight: Fraction = Fraction(1, 2)

    def __post_init__(self):
        super().__post_init__()
        w = frac(self.weight)
        if not 0 <= w <= 1:
            raise MalformedMapError("convex weight must lie in [0, 1]")
        object.__setattr__(self, "weight", w)

    @property
    def convex(self):
        return self.a.convex and self.b.convex

    @property
    def affine(self):
        return self.a.affine and self.b.affine

    def _eval(self, x, mode):
        u, v = self.a._eval(x, mode), self.b._eval(x, mode)
        w = self.weight
        if mode == "float":
            wf = float(w)
            return wf * u + (1.0 - wf) * v
        return [w * p + (1 - w) * q for p, q in zip(u, v)]

    def _nonexpansive_in(self, norm):
        return self.a.structurally_nonexpansive(norm) and self.b.structurally_nonexpansive(norm)

    def recession(self):
        return ConvexCombination(self.a.recession(), self.b.recession(), self.weight)

    def to_dict(self):
        return {"op": "convex", "weight": str(self.weight), "args": [self.a.to_dict(), self.b.to_dict()]}


@dataclass(frozen=True, eq=False)
class Affine(MapExpr):
    """``x -> A x + b``; nonexpansive when the operator norm of A is at most 1."""

    matrix: tuple
    offset: tuple | None = None
    convex = affine = True

    def __post_init__(self):
        a = tuple(vec(row) for row in self.matrix)
        n = len(a)
        if n == 0 or any(len(row) != n for row in a):
            raise DimensionError("affine maps need a square matrix")
        b = vec(self.offset) if self.offset is not None else (ZERO,) * n
        if len(b) != n:
            raise DimensionError("offset has the wrong length")
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "offset", b)

    @property
    def dim(self):
        return len(self.matrix)

    @property
    def order_preserving(self):
        return all(v >= 0 for row in self.matrix for v in row)

    @property
    def topical(self):
        return self.order_preserving and all(sum(row) == 1 for row in self.matrix)

    @property
    def subtopical(self):
        return self.order_preserving and all(sum(row) <= 1 for row in self.matrix)

    @property
    def homogeneous(self):
        return all(v == 0 for v in self.offset)

    @cached_property
    def _floats(self):
        return (
            np.array([[float(v) for v in row] for row in self.matrix]),
            np.array([float(v) for v in self.offset]),
        )

    def _eval(self, x, mode):
        if mode == "float":
            a, b = self._floats
            return a @ x + b
        return [
            _linear_sum((c * v for c, v in zip(row, x) if c != 0), off)
            for row, off in zip(self.matrix, self.offset)
        ]

    def _linear_matrix(self):
        return self.matrix

    def structurally_nonexpansive(self, norm):
        if norm.dimension != self.dim:
            return False
        if norm.kind == "sup" and self.subtopical:
            return True
        return operator_norm(self.matrix, norm) <= 1

    def recession(self):
        return Affine(self.matrix)

    def to_dict(self):
        return {
            "op": "affine",
            "matrix": [[str(v) for v in row] for row in self.matrix],
            "offset": [str(v) for v in self.offset],
        }


def scaling(n: int, c) -> Affine:
    c = frac(c)
    return Affine(tuple(tuple(c if i == j else ZERO for j in range(n)) for i in range(n)))


def _maxplus_rows(rows):
    out = tuple(tuple(_entry(v) for v in row) for row in rows)
    for row in out:
        if all(v is BOT for v in row):
            raise MalformedMapError("max-plus row with only bottom entries")
    return out


def _maxplus_row_eval(row, x):
    terms = [a + v for a, v in zip(row, x) if a is not BOT]
    return reduce(_max, terms)


def _float_rows(rows):
    return np.array([[-np.inf if v is BOT else float(v) for v in row] for row in rows])


@dataclass(frozen=True, eq=False)
class MaxPlus(MapExpr):
    """``T_i(x) = max_j (A_ij + x_j)``; ``None`` entries are bottom."""

    matrix: tuple
    order_preserving = topical = subtopical = convex = True

    def __post_init__(self):
        rows = _maxplus_rows(self.matrix)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("max-plus maps need a square matrix")
        object.__setattr__(self, "matrix", rows)

    @property
    def dim(self):
        return len(self.matrix)

    @property
    def homogeneous(self):
        return all(v is BOT or v == 0 for row in self.matrix for v in row)

    @cached_property
    def _fa(self):
        return _float_rows(self.matrix)

    def _eval(self, x, mode):
        if mode == "float":
            return np.max(self._fa + x[None, :], axis=1)
        return [_maxplus_row_eval(row, x) for row in self.matrix]

    def recession(self):
        return MaxPlus(tuple(tuple(BOT if v is BOT else ZERO for v in row) for row in self.matrix))

    def to_dict(self):
        return {"op": "maxplus", "matrix": [[_entry_str(v) for v in row] for row in self.matrix]}


def _entry_str(v):
    return "bot" if v is BOT else str(v)


@dataclass(frozen=True, eq=False)
class MinMax(MapExpr):
    """``T_i(x) = min_k max_j (A^(i,k)_j + x_j)``: a Shapley operator fragment.

    ``rows[i]`` is the list of max-plus rows minimised for coordinate ``i``.
    """

    rows: tuple
    order_preserving = topical = subtopical = True

    def __post_init__(self):
        rows = tuple(_maxplus_rows(r) for r in self.rows)
        n = len(rows)
        if n == 0 or any(not r for r in rows) or any(len(v) != n for r in rows for v in r):
            raise DimensionError("min-max rows must have length n and be nonempty")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self):
        return len(self.rows)

    @property
    def convex(self):
        return all(len(r) == 1 for r in self.rows)

    @property
    def homogeneous(self):
        return all(v is BOT or v == 0 for r in self.rows for row in r for v in row)

    @cached_property
    def _fa(self):
        return [_float_rows(r) for r in self.rows]

    def _eval(self, x, mode):
        if mode == "float":
            return np.array([np.min(np.max(a + x[None, :], axis=1)) for a in self._fa])
        return [reduce(_min, [_maxplus_row_eval(row, x) for row in r]) for r in self.rows]

    def recession(self):
        return MinMax(
            tuple(tuple(tuple(BOT if v is BOT else ZERO for v in row) for row in r) for r in self.rows)
        )

    def to_dict(self):
        return {
            "op": "minmax",
            "rows": [[[_entry_str(v) for v in row] for row in r] for r in self.rows],
        }


@dataclass(frozen=True, eq=False)
class ShrinkSqrt(MapExpr):
    """Coordinate ``k`` goes to ``x - sqrt(x)`` for ``x > 1`` and 0 otherwise.

    The single non-piecewise-affine builtin; other coordinates pass through.
    """

    dim: int
    coordinate: int = 0
    pwa = False
    order_preserving = subtopical = convex = True

    def __post_init__(self):
        if not 0 <= self.coordinate < self.dim:
            raise MalformedMapError("coordinate out of range")

    def _eval(self, x, mode):
        k = self.coordinate
        if mode == "float":
            out = x.copy()
            out[k] = x[k] - math.sqrt(x[k]) if x[k] > 1 else 0.0
            return out
        if mode == "ray":
            raise NotPiecewiseAffineError("shrink-sqrt has no exact ray restriction")
        out = list(x)
        v = x[k]
        if v <= 1:
            out[k] = ZERO
        else:
            root = _rational_sqrt(v)
            if root is None:
                raise NotPiecewiseAffineError("irrational square root in exact mode")
            out[k] = v - root
        return out

    def _nonexpansive_in(self, norm):
        return norm.kind in ("sup", "one")

    def recession(self):
        keep = frozenset(range(self.dim)) - {self.coordinate}
        return Clip(self.dim, frozenset([self.coordinate]), keep)

    def to_dict(self):
        return {"op": "shrink_sqrt", "n": self.dim, "coordinate": self.coordinate}


def _rational_sqrt(v: Fraction):
    p, q = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if p * p == v.numerator and q * q == v.denominator:
        return Fraction(p, q)
    return None


@dataclass(frozen=True, eq=False)
class Normalize(MapExpr):
    """``T(x) - mean(T(x)) e_N`` restricted to V0, in the variation chart.

    The chart drops the last coordinate of a zero-sum vector.
    """

    inner: MapExpr

    def __post_init__(self):
        if self.inner.dim < 2:
            raise DimensionError("normalization needs n >= 2")

    @property
    def dim(self):
        return self.inner.dim - 1

    @property
    def ambient(self):
        return self.inner.dim

    def children(self):
        return (self.inner,)

    @property
    def pwa(self):
        return self.inner.pwa

    @property
    def homogeneous(self):
        return self.inner.homogeneous

    def _eval(self, v, mode):
        n = self.inner.dim
        if mode == "float":
            x = np.append(v, -np.sum(v))
            y = self.inner._eval(x, mode)
            return (y - np.mean(y))[:-1]
        x = list(v) + [-_linear_sum(v, ZERO)]
        y = self.inner._eval(x, mode)
        mean = _linear_sum(y, ZERO) * Fraction(1, n)
        return [c - mean for c in y[:-1]]

    def _nonexpansive_in(self, norm):
        return norm.kind == "variation" and norm.ambient == self.inner.dim and self.inner.topical

    def recession(self):
        return Normalize(self.inner.recession())

    def to_dict(self):
        return {"op": "normalize", "map": self.inner.to_dict()}


@dataclass(frozen=True, eq=False)
class BlackBox(MapExpr):
    """A user callable.  Routed to numeric paths unless ``exact`` is given.

    ``exact`` (optional) maps rational tuples to rational tuples; with
    ``homogeneous=True`` it lets ray restrictions from the origin stay exact.
    """

    dim: int
    fn: Callable
    exact_fn: Callable | None = None
    name: str = "blackbox"
    flags: dict = field(default_factory=dict)

    pwa = False

    def __getattribute__(self, item):
        if item in ("order_preserving", "topical", "subtopical", "convex", "homogeneous"):
            return object.__getattribute__(self, "flags").get(item, False)
        return object.__getattribute__(self, item)

    def _eval(self, x, mode):
        if mode == "float":
            return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float)
        if mode == "exact" and self.exact_fn is not None:
            return list(vec(self.exact_fn(tuple(x))))
        raise NotPiecewiseAffineError(f"{self.name} has no exact evaluator")

    def _nonexpansive_in(self, norm):
        return norm.kind in self.flags.get("nonexpansive_in", ())

    def recession(self):
        raise NotPiecewiseAffineError(f"{self.name}: recession map only available numerically")

    def to_dict(self):
        raise TypeError("black-box maps cannot be serialized")


# -- public operations --------------------------------------------------------


def evaluate(f: MapExpr, x, exact: bool | None = None):
    """Evaluate ``f`` at ``x``.

    Exact mode (rational in, rational tuple out) is chosen automatically when
    ``x`` is rational and ``f`` is piecewise affine; otherwise a float array is
    returned.
    """
    if len(x) != f.dim:
        raise DimensionError(f"map has dimension {f.dim}, point has length {len(x)}")
    if exact is None:
        exact = is_rational_vector(x) and (f.pwa or _has_exact(f))
    if exact:
        x = vec(x)
        if not (f.pwa or _has_exact(f)):
            raise NotPiecewiseAffineError("exact evaluation needs a piecewise-affine map")
        return tuple(f._eval(list(x), "exact"))
    return f._eval(np.asarray([float(v) for v in x]), "float")


def _has_exact(f):
    return isinstance(f, BlackBox) and f.exact_fn is not None


def ray_image(f: MapExpr, base, direction) -> list:
    """Coordinates of ``t -> f(base + t direction)`` as exact PWA functions."""
    base, direction = vec(base), vec(direction)
    if len(base) != f.dim or len(direction) != f.dim:
        raise DimensionError("ray and map dimensions differ")
    if f.homogeneous and _has_exact(f) and all(b == 0 for b in base):
        img = f._eval(list(direction), "exact")
        return [PwaFunction1D.affine(c, 0) for c in img]
    if not f.pwa:
        raise NotPiecewiseAffineError("exact ray restriction needs a piecewise-affine map")
    x = [PwaFunction1D.affine(d, b) for b, d in zip(base, direction)]
    out = f._eval(x, "ray")
    return [v if _is_pwa(v) else PwaFunction1D.constant(v) for v in out]


def normalize_topical(t: MapExpr) -> Normalize:
    """The variation-chart map whose fixed points are additive eigenvectors of ``t``."""
    if not t.topical:
        raise MalformedMapError("normalize_topical needs a map flagged topical")
    return Normalize(t)


@dataclass
class NonexpansivenessReport:
    norm: PolyhedralNorm
    mode: str  # "structural" or "sampled"
    sample_count: int
    max_observed_ratio: object
    verdict: str  # "guaranteed", "consistent", "violated"
    witness: tuple | None = None


def check_nonexpansive(f: MapExpr, norm: PolyhedralNorm, samples: int = 100, seed: int = 0):
    """Structural guarantee when available, otherwise a seeded sampling test."""
    if norm.dimension != f.dim:
        raise DimensionError("map and norm dimensions differ")
    if f.structurally_nonexpansive(norm):
        return NonexpansivenessReport(norm, "structural", 0, None, "guaranteed")
    rng = np.random.default_rng(seed)
    exact = f.pwa or _has_exact(f)
    worst, witness = None, None
    for k in range(samples):
        scale = 10 ** int(rng.integers(0, 4))
        if exact:
            x = tuple(Fraction(int(v), 4) * scale for v in rng.integers(-40, 41, f.dim))
            y = tuple(Fraction(int(v), 4) * scale for v in rng.integers(-40, 41, f.dim))
        else:
            x = tuple(rng.normal(size=f.dim) * scale)
            y = tuple(rng.normal(size=f.dim) * scale)
        if x == y:
            continue
        fx, fy = evaluate(f, x, exact), evaluate(f, y, exact)
        num = norm.value(sub(fx, fy) if exact else np.asarray(fx) - np.asarray(fy))
        den = norm.value(sub(x, y) if exact else np.asarray(x) - np.asarray(y))
        ratio = num / den
        if worst is None or ratio > worst:
            worst = ratio
            witness = (x, y)
    limit = 1 if exact else 1 + 1e-12
    if worst is not None and worst > limit:
        return NonexpansivenessReport(norm, "sampled", samples, worst, "violated", witness)
    return NonexpansivenessReport(norm, "sampled", samples, worst, "consistent")


def iter_nodes(f: MapExpr):
    yield f
    for c in f.children():
        yield from iter_nodes(c)
