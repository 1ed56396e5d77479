"""Named example maps and seeded random families used by demos and tests."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .mapexpr import (
    BOT,
    Affine,
    Clip,
    Constant,
    ConvexCombination,
    Identity,
    MapExpr,
    MaxPlus,
    MinMax,
    Permutation,
    PointwiseMax,
    PointwiseMin,
    ShrinkSqrt,
    SignFlip,
    Translate,
    compose,
    scaling,
)


def cyclic_permutation(n: int, cycle) -> Permutation:
    """``S(x)_i = x_{sigma(i)}`` with sigma cycling the sorted ``cycle``."""
    members = sorted(cycle)
    sigma = list(range(n))
    for k, i in enumerate(members):
        sigma[i] = members[(k + 1) % len(members)]
    return Permutation(tuple(sigma))


def example_sup_face(n: int, K, L) -> MapExpr:
    """``D_L o S o P_KL o D_L``: sup-nonexpansive, fixes the ray through
    ``e_K - e_L`` and passes every other face test."""
    K, L = frozenset(K), frozenset(L)
    if K & L or not (K | L):
        raise ValueError("K and L must be disjoint with nonempty union")
    D = SignFlip(n, L)
    P = Clip(n, K | L)
    S = cyclic_permutation(n, K | L)
    return compose(D, S, P, D)


def shrink_sqrt(n: int = 1) -> ShrinkSqrt:
    return ShrinkSqrt(n, 0)


def midpoint_map(n: int = 2) -> MapExpr:
    """``((max x + min x) / 2) e``: every constant vector is fixed."""
    top = MaxPlus(tuple(tuple(0 for _ in range(n)) for _ in range(n)))
    rows = tuple(tuple(tuple(0 if j == k else BOT for j in range(n)) for k in range(n)) for _ in range(n))
    return ConvexCombination(top, MinMax(rows), Fraction(1, 2))


def min_clip(c) -> MapExpr:
    """Componentwise ``min(x, c)``: subtopical, not surjective."""
    c = tuple(c)
    return PointwiseMin(Identity(len(c)), Constant(c))


def half(n: int) -> MapExpr:
    return scaling(n, Fraction(1, 2))


# -- random families ----------------------------------------------------------


def _maxplus_row(n, rng, bot_prob, lo=-3, hi=3):
    row = [BOT if rng.random() < bot_prob else int(rng.integers(lo, hi + 1)) for _ in range(n)]
    if all(v is BOT for v in row):
        row[int(rng.integers(n))] = int(rng.integers(lo, hi + 1))
    return tuple(row)


def random_maxplus(n: int, rng, bot_prob: float = 0.55) -> MaxPlus:
    return MaxPlus(tuple(_maxplus_row(n, rng, bot_prob) for _ in range(n)))


def random_minmax(n: int, rng, max_rows: int = 2, bot_prob: float = 0.6) -> MinMax:
    """Shapley-operator fragment: each coordinate a min of max-plus rows."""
    return MinMax(
        tuple(
            tuple(_maxplus_row(n, rng, bot_prob) for _ in range(int(rng.integers(1, max_rows + 1))))
            for _ in range(n)
        )
    )


def _random_leaf(n, rng, homogeneous=True):
    kind = int(rng.integers(0, 7 if homogeneous else 9))
    if kind == 0:
        return Identity(n)
    if kind == 1:
        return Permutation(tuple(int(v) for v in rng.permutation(n)))
    if kind == 2:
        return SignFlip(n, frozenset(int(i) for i in np.flatnonzero(rng.random(n) < 0.5)))
    if kind == 3:
        mask = rng.integers(0, 3, n)
        return Clip(n, frozenset(int(i) for i in np.flatnonzero(mask == 0)),
                    frozenset(int(i) for i in np.flatnonzero(mask == 1)))
    if kind == 4:
        return scaling(n, Fraction(int(rng.integers(0, 3)), 2))
    if kind == 5:
        return MaxPlus(tuple(tuple(0 if rng.random() < 0.5 or j == i else BOT for j in range(n)) for i in range(n)))
    if kind == 6:
        return Constant((0,) * n)
    if kind == 7:
        return Translate(tuple(int(v) for v in rng.integers(-2, 3, n)))
    return random_maxplus(n, rng)


def random_sup_pwa(n: int, rng, depth: int = 3, homogeneous: bool = True) -> MapExpr:
    """A random sup-nonexpansive piecewise-affine map built from guaranteed
    constructors; ``homogeneous`` keeps it positively homogeneous."""
    if depth <= 0:
        return _random_leaf(n, rng, homogeneous)
    op = int(rng.integers(0, 5))
    a = random_sup_pwa(n, rng, depth - 1, homogeneous)
    if op == 0:
        return a
    b = random_sup_pwa(n, rng, depth - 1, homogeneous)
    if op == 1:
        return compose(a, b)
    if op == 2:
        return PointwiseMax(a, b)
    if op == 3:
        return PointwiseMin(a, b)
    return ConvexCombination(a, b, Fraction(int(rng.integers(1, 4)), 4))


def random_subtopical(n: int, rng, depth: int = 2) -> MapExpr:
    """Order-preserving, additively subhomogeneous, piecewise affine."""
    if depth <= 0:
        kind = int(rng.integers(0, 5))
        if kind == 0:
            return random_maxplus(n, rng)
        if kind == 1:
            return random_minmax(n, rng)
        if kind == 2:
            return scaling(n, Fraction(int(rng.integers(0, 3)), 2))
        if kind == 3:
            return Constant(tuple(int(v) for v in rng.integers(-2, 3, n)))
        return Translate(tuple(int(v) for v in rng.integers(-2, 3, n)))
    a = random_subtopical(n, rng, depth - 1)
    b = random_subtopical(n, rng, depth - 1)
    op = int(rng.integers(0, 4))
    if op == 0:
        return compose(a, b)
    if op == 1:
        return PointwiseMax(a, b)
    if op == 2:
        return PointwiseMin(a, b)
    return ConvexCombination(a, b, Fraction(1, 2))


def random_affine_contraction(n: int, rng) -> Affine:
    """Rows with absolute sum at most 1: sup-nonexpansive."""
    rows = []
    for _ in range(n):
        w = rng.integers(-2, 3, n)
        tot = int(np.sum(np.abs(w))) or 1
        rows.append(tuple(Fraction(int(v), tot + int(rng.integers(0, 2))) for v in w))
    return Affine(tuple(rows), tuple(int(v) for v in rng.integers(-2, 3, n)))


DEMOS = ("sup-face", "shrink-sqrt", "min-clip", "midpoint", "half")
