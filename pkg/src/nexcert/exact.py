"""Small helpers for exact rational linear algebra."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of Fractions

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(value) -> Fraction:
    """Convert ints, Fractions, decimal strings and "p/q" strings exactly.

    Floats are converted through their shortest repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to a rational")


def vec(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, indices: Iterable[int], value=ONE) -> Vector:
    """The indicator vector e_I scaled by ``value``."""
    idx = set(indices)
    return tuple(Fraction(value) if i in idx else ZERO for i in range(n))


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), ZERO)


def add(x: Sequence, y: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence, y: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x: Sequence) -> Vector:
    return tuple(c * a for a in x)


def centroid(points: Sequence[Sequence]) -> Vector:
    k = len(points)
    if k == 0:
        raise ValueError("centroid of an empty set")
    n = len(points[0])
    return tuple(sum((p[i] for p in points), ZERO) / k for i in range(n))


def is_rational_vector(x) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in x)


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational matrix by fraction-exact Gaussian elimination."""
    m = [list(map(frac, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] != 0:
                factor = m[i][c] / m[r][c]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Solve the square system ``a x = b`` exactly; None if singular."""
    n = len(a)
    m = [list(map(frac, row)) + [frac(rhs)] for row, rhs in zip(a, b)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [u - factor * v for u, v in zip(m[i], m[c])]
    return tuple(row[n] for row in m)


def fmt(x) -> str:
    """Render a rational (or float) compactly: ``3``, ``-1/2``."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x)


def fmt_vec(x: Sequence) -> list[str]:
    return [fmt(v) for v in x]
