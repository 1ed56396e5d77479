"""Limits of ray pairings ``g(t) = <f(b + t d) - b - t d, p>`` as t grows.

Exact for piecewise-affine maps (through :mod:`nexcert.pwa`), numeric by a
doubling schedule otherwise.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ContractBreachError, NotPiecewiseAffineError, ResourceLimitError
from .exact import ZERO, dot, vec
from .mapexpr import MapExpr, evaluate, ray_image
from .pwa import PwaFunction1D


class Outcome(str, enum.Enum):
    MINUS_INFINITY = "MinusInfinity"
    PLUS_INFINITY = "PlusInfinity"
    FINITE = "Finite"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class NumericPolicy:
    t0: float = 1.0
    factor: float = 2.0
    max_doublings: int = 60
    divergence_bound: float = 1e9
    slope_tol: float = 1e-9
    stable_steps: int = 3
    #: samples whose rounding noise exceeds this (relative to max(1, |g|)) are
    #: too coarse to show a finite limit
    noise_tol: float = 1e-6

    def as_dict(self):
        return {
            "t0": self.t0,
            "factor": self.factor,
            "max_doublings": self.max_doublings,
            "divergence_bound": self.divergence_bound,
            "slope_tol": self.slope_tol,
            "stable_steps": self.stable_steps,
            "noise_tol": self.noise_tol,
        }


DEFAULT_POLICY = NumericPolicy()


@dataclass(frozen=True)
class LimitVerdict:
    outcome: Outcome
    mode: str  # "exact" or "numeric"
    value: object = None  # finite limit, or last sample when inconclusive
    evidence: dict = field(default_factory=dict, compare=False)

    @property
    def diverges_down(self) -> bool:
        return self.outcome is Outcome.MINUS_INFINITY

    @property
    def diverges_up(self) -> bool:
        return self.outcome is Outcome.PLUS_INFINITY

    @property
    def finite(self) -> bool:
        return self.outcome is Outcome.FINITE

    @property
    def inconclusive(self) -> bool:
        return self.outcome is Outcome.INCONCLUSIVE

    def as_dict(self) -> dict:
        out = {"outcome": self.outcome.value, "mode": self.mode}
        if self.value is not None:
            out["value"] = _scalar(self.value)
        out.update({k: _scalar(v) for k, v in self.evidence.items()})
        return out


def _scalar(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, (list, tuple)):
        return [_scalar(x) for x in v]
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


def restrict_to_ray(
    f: MapExpr, base, direction, pairing, displacement: bool = True
) -> PwaFunction1D:
    """Exact ``t -> <f(base + t d) - [base + t d], pairing>``.

    With ``displacement=False`` the bracketed term is omitted.
    """
    base, direction, pairing = vec(base), vec(direction), vec(pairing)
    img = ray_image(f, base, direction)
    terms = [c * y for c, y in zip(pairing, img) if c != 0]
    g = sum(terms, PwaFunction1D.constant(0))
    if displacement:
        g = g - PwaFunction1D.affine(dot(direction, pairing), dot(base, pairing))
    return g


def sample_pairing(f: MapExpr, base, direction, pairing, displacement: bool = True):
    """Float callable ``t -> g(t)`` for the numeric path."""
    b = np.array([float(v) for v in base])
    d = np.array([float(v) for v in direction])
    p = np.array([float(v) for v in pairing])

    def g(t: float) -> float:
        x = b + t * d
        y = np.asarray(evaluate(f, x, exact=False))
        if displacement:
            y = y - x
        return float(p @ y)

    return g


def classify_limit_at_infinity(g: PwaFunction1D, expect: str | None = "nonincreasing") -> LimitVerdict:
    """Exact limit of a piecewise-affine function.

    ``expect`` names the monotonicity the caller's theory guarantees; a final
    slope of the wrong sign is a contract breach (the map was not nonexpansive
    or not order preserving).
    """
    s = g.final_slope
    if expect == "nonincreasing" and s > 0:
        raise ContractBreachError(f"pairing eventually increases (slope {s}); map is not nonexpansive")
    if expect == "nondecreasing" and s < 0:
        raise ContractBreachError(f"pairing eventually decreases (slope {s}); map is not order preserving")
    ev = {"final_slope": s, "pieces": g.piece_count}
    if s < 0:
        return LimitVerdict(Outcome.MINUS_INFINITY, "exact", None, ev)
    if s > 0:
        return LimitVerdict(Outcome.PLUS_INFINITY, "exact", None, ev)
    return LimitVerdict(Outcome.FINITE, "exact", g.final_intercept, ev)


def classify_samples(gfun, policy: NumericPolicy = DEFAULT_POLICY, expect: str | None = "nonincreasing",
                     scale: float = 1.0) -> LimitVerdict:
    """Numeric limit from a doubling schedule.

    Divergence takes priority: it is declared when the samples cross the
    divergence bound with consistently signed secants.  A finite limit needs
    ``stable_steps`` increments below ``slope_tol * max(1, |g|)`` plus a
    rounding allowance proportional to ``t * scale``, read on the samples whose
    allowance is still below ``noise_tol``.
    """
    ts, gs = [], []
    t = policy.t0
    eps = np.finfo(float).eps
    k_stable = policy.stable_steps
    for _ in range(policy.max_doublings + 1):
        v = gfun(t)
        if not math.isfinite(v):
            break
        ts.append(t)
        gs.append(v)
        if len(gs) >= 2:
            allowance = policy.slope_tol * max(1.0, abs(v)) + 64 * eps * t * scale
            if expect == "nonincreasing" and gs[-1] > gs[-2] + allowance:
                raise ContractBreachError(f"sampled pairing increased between t={ts[-2]} and t={t}")
            if expect == "nondecreasing" and gs[-1] < gs[-2] - allowance:
                raise ContractBreachError(f"sampled pairing decreased between t={ts[-2]} and t={t}")
        if len(gs) > k_stable and abs(v) > policy.divergence_bound:
            diffs = np.diff(gs[-(k_stable + 1):])
            if v < 0 and np.all(diffs < 0):
                return LimitVerdict(Outcome.MINUS_INFINITY, "numeric", None, _numeric_ev(ts, gs))
            if v > 0 and np.all(diffs > 0):
                return LimitVerdict(Outcome.PLUS_INFINITY, "numeric", None, _numeric_ev(ts, gs))
        t *= policy.factor
    noise = [64 * eps * t * scale for t in ts]
    # late samples of f(t x) - t x lose their O(1) part to cancellation, so a
    # finite limit is judged on the prefix where rounding noise is small
    m = len(gs)
    while m > 0 and noise[m - 1] > policy.noise_tol * max(1.0, abs(gs[m - 1])):
        m -= 1
    if m > k_stable:
        ok = [
            abs(gs[i + 1] - gs[i]) <= policy.slope_tol * max(1.0, abs(gs[i + 1])) + noise[i + 1]
            for i in range(m - 1)
        ]
        if all(ok[-k_stable:]):
            start = len(ok)
            while start > 0 and ok[start - 1]:
                start -= 1
            best = min(range(start + 1, m), key=lambda i: abs(gs[i] - gs[i - 1]) + noise[i])
            ev = _numeric_ev(ts, gs)
            ev["value_t"] = ts[best]
            return LimitVerdict(Outcome.FINITE, "numeric", gs[best], ev)
    last = gs[-1] if gs else None
    return LimitVerdict(Outcome.INCONCLUSIVE, "numeric", last, _numeric_ev(ts, gs))


def _numeric_ev(ts, gs):
    slopes = [(gs[i + 1] - gs[i]) / (ts[i + 1] - ts[i]) for i in range(len(gs) - 1)]
    return {"samples": len(gs), "last_t": ts[-1] if ts else None, "slopes": slopes[-4:]}


def classify_limit_numeric(
    f: MapExpr, base, direction, pairing, policy: NumericPolicy = DEFAULT_POLICY,
    displacement: bool = True, expect: str | None = "nonincreasing",
) -> LimitVerdict:
    scale = max(1.0, float(max(abs(float(v)) for v in direction))) * max(
        1.0, float(sum(abs(float(v)) for v in pairing))
    )
    g = sample_pairing(f, base, direction, pairing, displacement)
    return classify_samples(g, policy, expect, scale)


def ray_limit(
    f: MapExpr, base, direction, pairing, policy: NumericPolicy = DEFAULT_POLICY,
    displacement: bool = True, expect: str | None = "nonincreasing",
) -> LimitVerdict:
    """Exact when possible, numeric on non-pwa maps or piece-count overflow."""
    try:
        g = restrict_to_ray(f, base, direction, pairing, displacement)
    except (NotPiecewiseAffineError, ResourceLimitError):
        return classify_limit_numeric(f, base, direction, pairing, policy, displacement, expect)
    return classify_limit_at_infinity(g, expect)


class InitialSign(str, enum.Enum):
    NEGATIVE = "negative_for_all_positive_t"
    ZERO = "zero_on_initial_interval"
    POSITIVE = "positive_for_all_positive_t"


def initial_sign(g: PwaFunction1D) -> InitialSign:
    """Sign of ``g`` just to the right of 0, for ``g(0) = 0``."""
    if g(ZERO) != 0:
        raise ValueError(f"g(0) = {g(ZERO)}; the ray must start at a fixed point")
    s = g.initial_slope
    if s < 0:
        return InitialSign.NEGATIVE
    if s > 0:
        return InitialSign.POSITIVE
    return InitialSign.ZERO
