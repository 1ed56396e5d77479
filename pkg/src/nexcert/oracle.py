"""Brute-force cross-checks by averaged fixed-point iteration.

These are falsifiers, not proofs: a residual floor suggests positive minimal
displacement, a found fixed point confirms solvability for that ``u``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonexpansivenessError
from .exact import scale
from .mapexpr import MapExpr, evaluate
from .polynorm import FaceDescriptor, PolyhedralNorm, enumerate_proper_faces

FIXED_POINT_FOUND = "FixedPointFound"
RESIDUAL_FLOOR = "ResidualFloor"
BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class IterationReport:
    verdict: str
    iterations: int
    residual: float
    point: np.ndarray
    history: list = field(default_factory=list)
    monotone_violations: int = 0
    norm: str = ""

    @property
    def found(self) -> bool:
        return self.verdict == FIXED_POINT_FOUND

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "iterations": self.iterations,
            "residual": float(self.residual),
            "point": [float(v) for v in self.point],
            "monotone_violations": self.monotone_violations,
            "heuristic": True,
        }


def _fl(x):
    return np.array([float(v) for v in x], dtype=float)


def minimal_displacement_estimate(
    f: MapExpr,
    u,
    norm: PolyhedralNorm,
    tol: float = 1e-8,
    max_iter: int = 100_000,
    x0=None,
    window: int = 1000,
    rel_change: float = 1e-6,
    history_every: int = 100,
) -> IterationReport:
    """Iterate ``x <- (x + f(x) + u) / 2`` and watch ``||f(x) + u - x||``.

    The residual is nonincreasing for nonexpansive ``f`` and tends to the
    minimal displacement of ``f + u``.
    """
    u = _fl(u)
    x = np.zeros(f.dim) if x0 is None else _fl(x0)
    dual = norm._dual_matrix
    residuals = []
    history = []
    violations = 0
    r0 = None
    for k in range(max_iter + 1):
        y = np.asarray(evaluate(f, x, exact=False)) + u
        r = float(np.max(dual @ (y - x)))
        if r0 is None:
            r0 = r
        if residuals and r > residuals[-1] * (1 + 1e-9) + 1e-12:
            violations += 1
            if r > 1e6 * (r0 + 1):
                raise NonexpansivenessError(f"residual grew from {r0} to {r}")
        residuals.append(r)
        if k % history_every == 0:
            history.append((k, r))
        if r <= tol:
            return IterationReport(FIXED_POINT_FOUND, k, r, x, history, violations, repr(norm))
        if k >= window:
            old = residuals[k - window]
            if old - r <= rel_change * old:
                return IterationReport(RESIDUAL_FLOOR, k, r, x, history, violations, repr(norm))
        x = 0.5 * (x + y)
    return IterationReport(BUDGET_EXHAUSTED, max_iter, residuals[-1], x, history, violations, repr(norm))


@dataclass
class ProbeResult:
    bounded: bool
    radius: float
    witness: np.ndarray | None = None
    residual: float | None = None

    @property
    def kind(self) -> str:
        return "BoundedUpTo" if self.bounded else "UnboundedWitness"


def fdelta_boundedness_probe(
    f: MapExpr, norm: PolyhedralNorm, delta: float = 0.1,
    radii=(10.0, 1e2, 1e3, 1e4, 1e5, 1e6), extra_directions: int = 20, seed: int = 0,
) -> ProbeResult:
    """Search rays through face representatives (and random directions) for far
    points with ``||f(x) - x|| <= delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    dirs = [_fl(F.representative) / norm.value(F.representative) for F in enumerate_proper_faces(norm)]
    rng = np.random.default_rng(seed)
    for _ in range(extra_directions):
        d = rng.normal(size=f.dim)
        dirs.append(d / norm.value(d))
    R = max(radii)
    for d in dirs:
        x = R * d
        r = norm.value(np.asarray(evaluate(f, x, exact=False)) - x)
        if r <= delta:
            return ProbeResult(False, R, x, float(r))
    return ProbeResult(True, R)


def multistart_fixed_points(
    f: MapExpr, norm: PolyhedralNorm, starts: int = 20, seed: int = 0,
    tol: float = 1e-8, max_iter: int = 100_000, spread: float = 10.0,
) -> list:
    """Distinct fixed points (more than ``10 tol`` apart) from seeded starts."""
    rng = np.random.default_rng(seed)
    inits = [np.zeros(f.dim)] + [rng.uniform(-spread, spread, f.dim) for _ in range(starts - 1)]
    found = []
    for x0 in inits:
        rep = minimal_displacement_estimate(f, np.zeros(f.dim), norm, tol, max_iter, x0=x0)
        if not rep.found:
            continue
        if all(norm.value(rep.point - p) > 10 * tol for p in found):
            found.append(rep.point)
    return found


def avoided_cone_samples(norm: PolyhedralNorm, face: FaceDescriptor, value, count: int = 5, seed: int = 0) -> list:
    """Points ``(c - 1) x_F + p`` with ``||p|| <= 1/2``.

    Each lies at distance at least 1/2 from the complement of the open cone
    ``W + c x_F``, so ``f + u`` with ``u`` the negated point has residual >= 1/2.
    """
    rng = np.random.default_rng(seed)
    apex = _fl(scale(value - 1, face.representative))
    out = []
    for _ in range(count):
        p = rng.normal(size=norm.dimension)
        p *= 0.5 * rng.uniform() / norm.value(p)
        out.append(apex + p)
    return out


def random_targets(n: int, count: int = 10, seed: int = 0, radius: float = 10.0) -> list:
    """Vectors with sup norm at most ``radius``."""
    rng = np.random.default_rng(seed)
    return [rng.uniform(-radius, radius, n) for _ in range(count)]
