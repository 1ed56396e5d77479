"""Polyhedral norms given by the extreme points of their dual unit ball.

A polyhedral norm on R^n is stored as the finite symmetric set of extreme
points of the dual ball, so that ``||x|| = max_nu <x, nu>``.  Every proper face
of the primal unit ball is identified with its *active set*: the dual extreme
points attaining the maximum on the face's relative interior.

The variation norm ``max(x) - min(x)`` lives on the zero-sum subspace
V0 = {x : sum(x) = 0} of R^n.  It is represented on the chart R^(n-1) obtained
by dropping the last coordinate; :meth:`PolyhedralNorm.lift` and
:meth:`PolyhedralNorm.chart` convert between the two.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DimensionError, ResourceLimitError
from .exact import ONE, ZERO, centroid, dot, frac, is_rational_vector, rank, solve, vec

KINDS = ("sup", "one", "variation", "custom")

#: custom norms are enumerated combinatorially; above this the face count explodes
CUSTOM_DIMENSION_CAP = 6


@dataclass(frozen=True)
class FaceDescriptor:
    """A proper face of the unit ball with exact relative-interior points.

    ``active`` indexes the dual extreme points equal to 1 on the face;
    ``representative`` is the centroid of the face's vertices and
    ``dual_representative`` the centroid of the active dual extreme points.
    """

    active: frozenset
    representative: tuple
    dual_representative: tuple
    label: tuple | None = None

    def describe(self) -> str:
        if self.label is None:
            return "active{" + ",".join(map(str, sorted(self.active))) + "}"
        a, b = self.label
        return f"({_set_str(a)},{_set_str(b)})"


def _set_str(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


@dataclass(frozen=True, eq=False)
class PolyhedralNorm:
    dimension: int
    dual_extreme_points: tuple
    kind: str = "custom"
    ambient: int | None = None
    _validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionError("dimension must be positive")
        if self.kind not in KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        pts = tuple(vec(p) for p in self.dual_extreme_points)
        object.__setattr__(self, "dual_extreme_points", pts)
        if any(len(p) != self.dimension for p in pts):
            raise DimensionError("dual extreme point of the wrong dimension")
        if self._validate:
            self._check_invariants()

    def _check_invariants(self):
        pts = self.dual_extreme_points
        as_set = set(pts)
        if len(as_set) != len(pts):
            raise ValueError("duplicate dual extreme points")
        if any(tuple(-v for v in p) not in as_set for p in pts):
            raise ValueError("dual extreme points are not symmetric")
        if rank(pts) < self.dimension:
            raise ValueError("dual extreme points do not span: not a norm")
        if self.kind == "custom":
            # minimality: every listed point must be a vertex of the dual polytope
            tight = [self._tight(y) for y in self.primal_vertices]
            for k in range(len(pts)):
                meet = None
                for s in tight:
                    if k in s:
                        meet = s if meet is None else meet & s
                if meet != frozenset([k]):
                    raise ValueError(f"dual point {k} is not an extreme point of the dual ball")

    # -- evaluation -------------------------------------------------------

    def _check_dim(self, x):
        if len(x) != self.dimension:
            raise DimensionError(f"expected a vector of length {self.dimension}, got {len(x)}")

    @cached_property
    def _dual_matrix(self) -> np.ndarray:
        return np.array([[float(v) for v in p] for p in self.dual_extreme_points])

    def value(self, x):
        """``||x||``: exact for rational input, float otherwise."""
        self._check_dim(x)
        if is_rational_vector(x):
            return max(dot(x, p) for p in self.dual_extreme_points)
        return float(np.max(self._dual_matrix @ np.asarray(x, dtype=float)))

    def dual_value(self, functional):
        """Dual norm ``max_{y in ext B1} <y, functional>``."""
        self._check_dim(functional)
        return max(dot(y, functional) for y in self.primal_vertices)

    def _tight(self, x) -> frozenset:
        return frozenset(k for k, p in enumerate(self.dual_extreme_points) if dot(x, p) == ONE)

    def active_set(self, x) -> frozenset:
        """Indices of dual extreme points with ``<x, nu> = ||x||`` (x nonzero)."""
        nrm = self.value(x)
        if nrm == 0:
            raise ValueError("the zero vector has no active set")
        return frozenset(k for k, p in enumerate(self.dual_extreme_points) if dot(x, p) == nrm)

    # -- variation chart ----------------------------------------------------

    def lift(self, v):
        """Chart point of the variation norm -> zero-sum vector in R^n."""
        if self.kind != "variation":
            raise ValueError("lift is only defined for the variation norm")
        self._check_dim(v)
        return tuple(v) + (-sum(v, ZERO if is_rational_vector(v) else 0.0),)

    def chart(self, x):
        if self.kind != "variation":
            raise ValueError("chart is only defined for the variation norm")
        if len(x) != self.ambient:
            raise DimensionError(f"expected a vector of length {self.ambient}")
        if sum(x) != 0:
            raise ValueError("variation chart needs a zero-sum vector")
        return tuple(x[:-1])

    # -- combinatorics ------------------------------------------------------

    @cached_property
    def primal_vertices(self) -> tuple:
        """Extreme points of the primal unit ball, exact."""
        n = self.dimension
        if self.kind == "sup":
            return tuple(vec(s) for s in itertools.product((1, -1), repeat=n))
        if self.kind == "one":
            out = []
            for i in range(n):
                for s in (1, -1):
                    out.append(tuple(Fraction(s) if j == i else ZERO for j in range(n)))
            return tuple(out)
        if self.kind == "variation":
            m = self.ambient
            out = []
            for size in range(1, m):
                for top in itertools.combinations(range(m), size):
                    a = ONE - Fraction(size, m)
                    b = -Fraction(size, m)
                    x = tuple(a if i in top else b for i in range(m))
                    out.append(x[:-1])
            return tuple(out)
        return _facets_of_dual(self.dual_extreme_points, n)

    def face_vertices(self, face: FaceDescriptor) -> tuple:
        return tuple(y for y in self.primal_vertices if face.active <= self._tight(y))

    @cached_property
    def _faces(self) -> tuple:
        if self.kind == "sup":
            return _sup_faces(self.dimension)
        if self.kind == "one":
            return _one_faces(self.dimension)
        if self.kind == "variation":
            return _variation_faces(self.ambient)
        return enumerate_faces_generic(self)

    def __repr__(self):
        if self.kind == "variation":
            return f"PolyhedralNorm(variation, n={self.ambient})"
        if self.kind != "custom":
            return f"PolyhedralNorm({self.kind}, n={self.dimension})"
        return f"PolyhedralNorm(custom, n={self.dimension}, {len(self.dual_extreme_points)} dual points)"


def builtin_norm(kind: str, n: int) -> PolyhedralNorm:
    """The sup, l1 or variation norm on R^n (variation: on the V0 chart)."""
    if n < 1:
        raise DimensionError("n must be at least 1")
    if kind == "sup":
        pts = []
        for i in range(n):
            for s in (1, -1):
                pts.append(tuple(Fraction(s) if j == i else ZERO for j in range(n)))
        return PolyhedralNorm(n, tuple(pts), "sup", _validate=False)
    if kind == "one":
        pts = tuple(vec(s) for s in itertools.product((1, -1), repeat=n))
        return PolyhedralNorm(n, pts, "one", _validate=False)
    if kind == "variation":
        if n < 2:
            raise DimensionError("the variation norm needs n >= 2")
        pts = tuple(_variation_functional(n, {i}, {j}) for i, j in _ordered_pairs(n))
        return PolyhedralNorm(n - 1, pts, "variation", ambient=n, _validate=False)
    raise ValueError(f"unknown builtin norm {kind!r}")


def custom_norm(dual_extreme_points: Sequence[Sequence]) -> PolyhedralNorm:
    pts = tuple(vec(p) for p in dual_extreme_points)
    if not pts:
        raise ValueError("a norm needs at least one dual extreme point")
    return PolyhedralNorm(len(pts[0]), pts, "custom")


def norm_value(norm: PolyhedralNorm, x):
    return norm.value(x)


def enumerate_proper_faces(norm: PolyhedralNorm, *, cap: int = CUSTOM_DIMENSION_CAP) -> list:
    """Every proper face of the unit ball, each exactly once, in a fixed order."""
    if norm.kind == "custom" and norm.dimension > cap:
        raise ResourceLimitError(
            f"custom face enumeration capped at dimension {cap} (got {norm.dimension})"
        )
    return list(norm._faces)


def illuminates(norm: PolyhedralNorm, v, w) -> bool:
    """Does ``v`` illuminate the boundary point ``w``, i.e. ``||w + eps v|| < 1``?

    For a polyhedral norm this holds for all small eps > 0 exactly when ``v``
    strictly decreases every dual extreme point active at ``w``.
    """
    w = vec(w)
    v = vec(v)
    if norm.value(w) != ONE:
        raise ValueError("illumination is defined for points of norm 1")
    active = norm.active_set(w)
    return all(dot(v, norm.dual_extreme_points[k]) < 0 for k in active)


# -- closed forms -----------------------------------------------------------


def _ordered_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


def _variation_functional(n, top, bottom):
    """Chart coefficients of x -> <x, e_top/|top| - e_bottom/|bottom|> on V0."""
    nu = [ZERO] * n
    for i in top:
        nu[i] += Fraction(1, len(top))
    for j in bottom:
        nu[j] -= Fraction(1, len(bottom))
    return tuple(nu[k] - nu[n - 1] for k in range(n - 1))


def _sup_faces(n):
    faces = []
    for signs in _sign_patterns(n):
        plus = frozenset(i for i, s in enumerate(signs) if s > 0)
        minus = frozenset(i for i, s in enumerate(signs) if s < 0)
        active = frozenset([2 * i for i in plus] + [2 * j + 1 for j in minus])
        rep = tuple(Fraction(s) for s in signs)
        k = len(plus) + len(minus)
        faces.append(FaceDescriptor(active, rep, tuple(Fraction(s, k) for s in signs), (plus, minus)))
    return tuple(faces)


def _one_faces(n):
    sign_vectors = list(itertools.product((1, -1), repeat=n))
    faces = []
    for signs in _sign_patterns(n):
        support = [i for i, s in enumerate(signs) if s != 0]
        active = frozenset(
            k for k, sv in enumerate(sign_vectors) if all(sv[i] == signs[i] for i in support)
        )
        rep = tuple(Fraction(s, len(support)) for s in signs)
        plus = frozenset(i for i in support if signs[i] > 0)
        minus = frozenset(i for i in support if signs[i] < 0)
        faces.append(FaceDescriptor(active, rep, tuple(Fraction(s) for s in signs), (plus, minus)))
    return tuple(faces)


def _variation_faces(n):
    pairs = _ordered_pairs(n)
    faces = []
    for signs in _sign_patterns(n):
        top = frozenset(i for i, s in enumerate(signs) if s > 0)
        bottom = frozenset(i for i, s in enumerate(signs) if s < 0)
        if not top or not bottom:
            continue
        active = frozenset(k for k, (i, j) in enumerate(pairs) if i in top and j in bottom)
        # vertex centroid: each free coordinate is on top in half of the vertices
        free = n - len(top) - len(bottom)
        low = -(Fraction(len(top)) + Fraction(free, 2)) / n
        x = tuple(low + 1 if i in top else low if i in bottom else low + Fraction(1, 2) for i in range(n))
        faces.append(
            FaceDescriptor(active, x[:-1], _variation_functional(n, top, bottom), (top, bottom))
        )
    return tuple(faces)


def _sign_patterns(n):
    """Nonzero patterns in {0, 1, -1}^n ordered by support size, then lexicographically."""
    pats = [p for p in itertools.product((0, 1, -1), repeat=n) if any(p)]
    pats.sort(key=lambda p: (sum(1 for s in p if s), [(-abs(s), -s) for s in p]))
    return pats


# -- generic (custom) machinery ---------------------------------------------


def _facets_of_dual(points, n):
    """Vertices y of B1, i.e. facets {nu : <y, nu> = 1} of the dual polytope."""
    if n == 1:
        top = max(p[0] for p in points)
        return ((ONE / top,), (-ONE / top,))
    candidates = None
    try:
        candidates = _qhull_facet_candidates(points, n)
    except Exception:  # qhull unavailable or degenerate input
        candidates = None
    if candidates is None:
        candidates = _bruteforce_facets(points, n)
    return tuple(sorted(candidates))


def _verified_facet(points, idx, n):
    """Exact normal through the points ``idx`` if it defines a facet, else None."""
    basis = []
    for k in idx:
        trial = basis + [points[k]]
        if rank(trial) == len(trial):
            basis = trial
        if len(basis) == n:
            break
    if len(basis) < n:
        return None
    y = solve(basis, [ONE] * n)
    if y is None or any(dot(y, p) > ONE for p in points):
        return None
    tight = [p for p in points if dot(y, p) == ONE]
    if rank(tight) < n:
        return None
    return y


def _qhull_facet_candidates(points, n):
    from scipy.spatial import ConvexHull

    hull = ConvexHull(np.array([[float(v) for v in p] for p in points]))
    groups: dict[tuple, set] = {}
    for simplex, eq in zip(hull.simplices, hull.equations):
        key = tuple(np.round(eq / -eq[-1], 9))
        groups.setdefault(key, set()).update(int(k) for k in simplex)
    out = set()
    for idx in groups.values():
        y = _verified_facet(points, sorted(idx), n)
        if y is None:
            return None
        out.add(y)
    return out


def _bruteforce_facets(points, n):
    out = set()
    for idx in itertools.combinations(range(len(points)), n):
        sub = [points[k] for k in idx]
        if rank(sub) < n:
            continue
        y = solve(sub, [ONE] * n)
        if y is not None and all(dot(y, p) <= ONE for p in points):
            out.add(y)
    return out


def enumerate_faces_generic(norm: PolyhedralNorm) -> tuple:
    """Proper faces from vertex/facet incidence, without closed forms.

    Faces of B1 correspond to nonempty faces of the dual polytope; the latter are
    exactly the nonempty intersections of its facets, and facet ``y`` has vertex
    set ``{nu : <y, nu> = 1}``.
    """
    verts = norm.primal_vertices
    tight = [norm._tight(y) for y in verts]
    family = set(s for s in tight if s)
    frontier = list(family)
    while frontier:
        nxt = []
        for a in frontier:
            for s in tight:
                b = a & s
                if b and b not in family:
                    family.add(b)
                    nxt.append(b)
        frontier = nxt
    faces = []
    for a in family:
        members = [y for y, s in zip(verts, tight) if a <= s]
        faces.append(
            FaceDescriptor(
                a,
                centroid(members),
                centroid([norm.dual_extreme_points[k] for k in sorted(a)]),
            )
        )
    faces.sort(key=lambda f: (-len(f.active), sorted(f.active)))
    return tuple(faces)


def face_of_point(norm: PolyhedralNorm, x):
    """The proper face containing unit vector ``x`` in its relative interior."""
    active = norm.active_set(x)
    for face in norm._faces:
        if face.active == active:
            return face
    raise ValueError("no face with that active set")  # pragma: no cover


def face_gap(norm: PolyhedralNorm, face: FaceDescriptor) -> Fraction:
    """``max <x_F, nu>`` over dual extreme points not active on ``face``.

    It is below 1, and ``||R x_F - r y|| = R - r`` for every ``y`` in the face
    once ``0 <= r <= (1 - gap) R / 2``.
    """
    others = [dot(face.representative, p) for k, p in enumerate(norm.dual_extreme_points) if k not in face.active]
    return max(others) if others else -ONE
