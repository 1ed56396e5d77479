"""Certifiers for general polyhedral norms.

Surjectivity of the displacement ``f - id`` is decided face by face; uniqueness
of a fixed point by the sign of each face pairing just after the fixed point.
The recession, semiderivative, illumination and face-lattice tests are the
one-sided companions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .certificate import Certificate, FaceWitness, LimitEntry, PairWitness, SubsetWitness, Verdict
from .errors import (
    NonexpansivenessError,
    NotPiecewiseAffineError,
    PreconditionError,
    ResourceLimitError,
)
from .exact import ZERO, add, dot, scale, sub, unit, vec, zeros
from .mapexpr import BlackBox, MapExpr, _has_exact, check_nonexpansive, evaluate, ray_image
from .polynorm import FaceDescriptor, PolyhedralNorm, enumerate_proper_faces, illuminates
from .raylimits import (
    DEFAULT_POLICY,
    InitialSign,
    NumericPolicy,
    initial_sign,
    ray_limit,
    restrict_to_ray,
    sample_pairing,
)
from .topical import nonempty_subsets

#: numeric fixed-point residual accepted for non-exact maps
FIXED_POINT_TOL = 1e-9


@dataclass
class SlopeEntry:
    """Initial behaviour of a pairing that starts at 0."""

    key: str
    sign: InitialSign
    slope: object
    mode: str = "exact"

    def as_dict(self):
        return {"key": self.key, "initial": self.sign.value, "slope": str(self.slope), "mode": self.mode}


def _nonexpansive_mode(f, norm, assume):
    report = check_nonexpansive(f, norm)
    if report.verdict == "violated":
        raise NonexpansivenessError(
            f"map expands the norm (ratio {report.max_observed_ratio})", report.witness
        )
    if report.verdict == "consistent" and not assume:
        raise NonexpansivenessError(
            "nonexpansiveness is not structurally guaranteed; pass assume_nonexpansive=True"
        )
    return report.mode


def _exact_capable(f):
    return f.pwa or _has_exact(f)


def certify_surjective(
    f: MapExpr,
    norm: PolyhedralNorm,
    policy: NumericPolicy = DEFAULT_POLICY,
    assume_nonexpansive: bool = False,
) -> Certificate:
    """``f - id`` is onto iff every proper face limit is ``-inf``."""
    if f.dim != norm.dimension:
        raise PreconditionError("map and norm dimensions differ")
    ne_mode = _nonexpansive_mode(f, norm, assume_nonexpansive)
    faces = enumerate_proper_faces(norm)
    table, failing, inconclusive = [], [], False
    for face in faces:
        v = ray_limit(f, zeros(f.dim), face.representative, face.dual_representative, policy)
        table.append(LimitEntry(face.describe(), v))
        if v.inconclusive:
            inconclusive = True
        elif not v.diverges_down:
            failing.append((face, v))
    details = {
        "face_count": len(faces),
        "failing_faces": [fc.describe() for fc, _ in failing],
        "nonexpansiveness": ne_mode,
        "norm": repr(norm),
    }
    if failing:
        face, v = failing[0]
        witness = FaceWitness(face, v.value, norm, cone_value=_cone_value(f, norm, face, policy))
        return Certificate(Verdict.NOT_SURJECTIVE, "face_limits", witness, table, details)
    verdict = Verdict.INCONCLUSIVE if inconclusive else Verdict.SURJECTIVE
    return Certificate(verdict, "face_limits", None, table, details)


def _cone_value(f, norm, face, policy):
    """Least limit over the active dual extreme points, or None if one is not finite."""
    vals = []
    for k in sorted(face.active):
        v = ray_limit(f, zeros(f.dim), face.representative, norm.dual_extreme_points[k], policy)
        if not v.finite:
            return None
        vals.append(v.value)
    return min(vals)


def failing_faces(cert: Certificate) -> list:
    return list(cert.details.get("failing_faces", []))


# -- uniqueness ---------------------------------------------------------------


def _check_fixed(f, u, lam=None):
    """Residual of ``f(u) = u`` (or ``u + lam e`` when ``lam`` is "eigen")."""
    exact = _exact_capable(f) and all(isinstance(c, (int, Fraction)) for c in u)
    fu = evaluate(f, u, exact=exact)
    if exact:
        diff = sub(fu, u)
    else:
        diff = tuple(float(a) - float(b) for a, b in zip(fu, u))
    if lam == "eigen":
        shift = diff[0]
        res = max(abs(d - shift) for d in diff)
        if res != 0 and (exact or res > FIXED_POINT_TOL):
            raise PreconditionError(f"u is not an additive eigenvector (residual {res})", float(res))
        return shift
    res = max(abs(d) for d in diff) if diff else 0
    if res != 0 and (exact or res > FIXED_POINT_TOL):
        raise PreconditionError(f"u is not a fixed point (residual {res})", float(res))
    return None


def _numeric_initial(f, base, direction, pairing, offset=0.0):
    """Heuristic initial sign for non-exact maps."""
    g = sample_pairing(f, base, direction, pairing)
    ts = [1e-6, 1e-5, 1e-4]
    vals = [g(t) - offset for t in ts]
    slope = vals[0] / ts[0]
    if all(v < -1e-9 * t for v, t in zip(vals, ts)):
        return InitialSign.NEGATIVE, slope
    if all(v > 1e-9 * t for v, t in zip(vals, ts)):
        return InitialSign.POSITIVE, slope
    return None, slope


def _ray_sign(f, base, direction, pairing, offset=ZERO):
    """(sign, slope, mode) of ``<f(b + t d) - b - t d, p> - offset`` near 0."""
    try:
        g = restrict_to_ray(f, base, direction, pairing) - offset
        return initial_sign(g), g.initial_slope, "exact"
    except (NotPiecewiseAffineError, ResourceLimitError):
        s, slope = _numeric_initial(f, base, direction, pairing, float(offset))
        return s, slope, "numeric"


def certify_unique(
    f: MapExpr, norm: PolyhedralNorm, u, assume_nonexpansive: bool = False
) -> Certificate:
    """``u`` is the only fixed point iff every face pairing based at ``u`` is
    negative for small ``t > 0``."""
    if f.dim != norm.dimension or len(u) != f.dim:
        raise PreconditionError("map, norm and point dimensions differ")
    u = vec(u) if all(isinstance(c, (int, Fraction)) for c in u) else tuple(u)
    _check_fixed(f, u)
    ne_mode = _nonexpansive_mode(f, norm, assume_nonexpansive)
    table, witness, unknown = [], None, False
    for face in enumerate_proper_faces(norm):
        s, slope, mode = _ray_sign(f, u, face.representative, face.dual_representative)
        if s is None:
            unknown = True
            table.append(SlopeEntry(face.describe(), InitialSign.ZERO, slope, "numeric-unresolved"))
            continue
        table.append(SlopeEntry(face.describe(), s, slope, mode))
        if s is InitialSign.POSITIVE:
            raise NonexpansivenessError(f"pairing increases on face {face.describe()}")
        if s is InitialSign.ZERO and witness is None and mode == "exact":
            witness = FaceWitness(face, None, norm, kind="invariant_face")
    details = {"face_count": len(table), "nonexpansiveness": ne_mode}
    if witness:
        return Certificate(Verdict.NOT_UNIQUE, "face_initial_slopes", witness, table, details)
    if unknown:
        return Certificate(Verdict.INCONCLUSIVE, "face_initial_slopes", None, table, details)
    return Certificate(Verdict.UNIQUE, "face_initial_slopes", None, table, details)


def certify_unique_subtopical(T: MapExpr, u, assume: bool = False) -> Certificate:
    """Uniqueness through the ``2(2^n - 1)`` rays ``u +- t e_I``."""
    if not (T.subtopical or assume):
        raise PreconditionError("map is not flagged subtopical")
    n = T.dim
    u = vec(u)
    _check_fixed(T, u)
    table, witness, unknown = [], None, False
    for I in nonempty_subsets(n):
        e = unit(n, I)
        for sign, d, want in (("+", e, InitialSign.NEGATIVE), ("-", unit(n, I, -1), InitialSign.POSITIVE)):
            s, slope, mode = _ray_sign(T, u, d, e)
            key = f"{sign}{{{','.join(map(str, sorted(I)))}}}"
            table.append(SlopeEntry(key, s or InitialSign.ZERO, slope, mode))
            if s is None:
                unknown = True
            elif s is not want and witness is None:
                witness = SubsetWitness(I, sign)
    if witness:
        return Certificate(Verdict.NOT_UNIQUE, "subtopical_initial_slopes", witness, table, {"n": n})
    verdict = Verdict.INCONCLUSIVE if unknown else Verdict.UNIQUE
    return Certificate(verdict, "subtopical_initial_slopes", None, table, {"n": n})


def certify_unique_eigenvector(T: MapExpr, u, assume: bool = False) -> Certificate:
    """Is ``u`` the only additive eigenvector of ``T`` up to adding constants?"""
    if not (T.topical or assume):
        raise PreconditionError("map is not flagged topical")
    n = T.dim
    u = vec(u)
    lam = _check_fixed(T, u, "eigen")
    subsets = list(nonempty_subsets(n, proper=True))
    low, up, table = {}, {}, []
    for I in subsets:
        comp = [k for k in range(n) if k not in I]
        low[I] = _ray_sign(T, u, unit(n, comp, -1), unit(n, I), lam * len(I))
        table.append(SlopeEntry(f"lower{_fs(I)}", low[I][0] or InitialSign.ZERO, low[I][1], low[I][2]))
    for J in subsets:
        comp = [k for k in range(n) if k not in J]
        up[J] = _ray_sign(T, u, unit(n, comp), unit(n, J), lam * len(J))
        table.append(SlopeEntry(f"upper{_fs(J)}", up[J][0] or InitialSign.ZERO, up[J][1], up[J][2]))
    witness, unknown = None, False
    for I in subsets:
        for J in subsets:
            if I & J:
                continue
            a, b = low[I][0], up[J][0]
            if a is InitialSign.NEGATIVE or b is InitialSign.POSITIVE:
                continue
            if a is None or b is None:
                unknown = True
                continue
            witness = PairWitness(I, J)
            break
        if witness:
            break
    details = {"n": n, "eigenvalue": lam}
    if witness:
        return Certificate(Verdict.NOT_UNIQUE, "eigenvector_initial_slopes", witness, table, details)
    verdict = Verdict.INCONCLUSIVE if unknown else Verdict.UNIQUE
    return Certificate(verdict, "eigenvector_initial_slopes", None, table, details)


def _fs(s):
    return "{" + ",".join(map(str, sorted(s))) + "}"


# -- recession map and semiderivative -------------------------------------------


@dataclass
class RecessionEstimate:
    """``f_inf(x) = lim f(t x) / t``: a map in exact mode, sampled values otherwise."""

    mode: str
    map: MapExpr | None = None
    directions: list = field(default_factory=list)
    values: list = field(default_factory=list)
    converged: list = field(default_factory=list)
    homogeneity_ok: bool = True


def _sample_directions(n, count, seed):
    rng = np.random.default_rng(seed)
    return [tuple(Fraction(int(v), 3) for v in rng.integers(-9, 10, n)) for _ in range(count)]


def _homogeneity_holds(g, directions):
    for x in directions:
        gx = evaluate(g, x, exact=True)
        for c in (Fraction(2), Fraction(1, 3), Fraction(7, 2)):
            if evaluate(g, scale(c, x), exact=True) != scale(c, gx):
                return False
    return True


def recession_map(f: MapExpr, samples: int = 8, seed: int = 0, policy: NumericPolicy = DEFAULT_POLICY) -> RecessionEstimate:
    directions = _sample_directions(f.dim, samples, seed)
    try:
        g = f.recession()
    except NotPiecewiseAffineError:
        g = None
    if g is not None and g.pwa:
        vals = [evaluate(g, x, exact=True) for x in directions]
        ok = _homogeneity_holds(g, directions)
        return RecessionEstimate("exact", g, directions, vals, [True] * len(directions), ok)
    # numeric: t^-1 f(t x) on the doubling schedule
    vals, conv = [], []
    for x in directions:
        xf = np.array([float(v) for v in x])
        prev, done, t = None, False, policy.t0
        for _ in range(policy.max_doublings):
            cur = np.asarray(evaluate(f, t * xf, exact=False)) / t
            if prev is not None and np.max(np.abs(cur - prev)) <= 1e-9 * max(1.0, np.max(np.abs(cur))):
                done = True
                break
            prev, t = cur, t * policy.factor
        vals.append(tuple(cur))
        conv.append(done)
    return RecessionEstimate("numeric", None, directions, vals, conv, True)


def certify_via_recession(
    f: MapExpr, norm: PolyhedralNorm, policy: NumericPolicy = DEFAULT_POLICY,
    assume_nonexpansive: bool = False,
) -> Certificate:
    """Sufficient test: 0 the only fixed point of ``f_inf`` implies surjectivity.

    A failure is never turned into a negative verdict.
    """
    _nonexpansive_mode(f, norm, assume_nonexpansive)
    est = recession_map(f, policy=policy)
    if est.mode != "exact":
        return Certificate(Verdict.INCONCLUSIVE, "recession", None, [], {"converged": est.converged})
    if not est.homogeneity_ok:
        return Certificate(Verdict.INCONCLUSIVE, "recession", None, [], {"reason": "recession map not homogeneous"})
    inner = certify_surjective(est.map, norm, policy, assume_nonexpansive=True)
    details = {"recession_verdict": inner.verdict.value, "recession_map": _describe(est.map)}
    verdict = Verdict.SURJECTIVE if inner.verdict is Verdict.SURJECTIVE else Verdict.SUFFICIENT_ONLY
    if inner.verdict is Verdict.INCONCLUSIVE:
        verdict = Verdict.INCONCLUSIVE
    return Certificate(verdict, "recession", inner.witness, inner.limit_table, details)


def _describe(g):
    try:
        return g.to_dict()
    except TypeError:
        return getattr(g, "name", type(g).__name__)


def semiderivative(f: MapExpr, u) -> BlackBox:
    """``f'_u(x) = lim_{t -> 0+} (f(u + t x) - f(u)) / t``, exact for pwa ``f``.

    Evaluated ray by ray from the initial slopes of the exact ray image.
    """
    if not f.pwa:
        raise NotPiecewiseAffineError("semiderivative needs a piecewise-affine map")
    u = vec(u)

    def exact_fn(x):
        return tuple(g.initial_slope for g in ray_image(f, u, x))

    def float_fn(x):
        return np.array([float(v) for v in exact_fn(vec(x))])

    return BlackBox(f.dim, float_fn, exact_fn, name="semiderivative", flags={"homogeneous": True})


def certify_unique_via_semiderivative(
    f: MapExpr, norm: PolyhedralNorm, u, assume_nonexpansive: bool = False
) -> Certificate:
    """Sufficient test: 0 the only fixed point of ``f'_u`` implies ``u`` unique."""
    u = vec(u)
    _check_fixed(f, u)
    _nonexpansive_mode(f, norm, assume_nonexpansive)
    if not f.pwa:
        return Certificate(Verdict.INCONCLUSIVE, "semiderivative", None, [], {"reason": "map is not piecewise affine"})
    g = semiderivative(f, u)
    inner = certify_unique(g, norm, zeros(f.dim), assume_nonexpansive=True)
    verdict = Verdict.UNIQUE if inner.verdict is Verdict.UNIQUE else Verdict.SUFFICIENT_ONLY
    return Certificate(verdict, "semiderivative", inner.witness, inner.limit_table, {"derivative_verdict": inner.verdict.value})


# -- homogeneous maps -------------------------------------------------------------


def _check_homogeneous(g, seed):
    if g.homogeneous:
        return
    rng = np.random.default_rng(seed)
    for _ in range(10):
        x = rng.normal(size=g.dim)
        gx = np.asarray(evaluate(g, x, exact=False))
        for c in (0.5, 3.0):
            if not np.allclose(evaluate(g, c * x, exact=False), c * gx, rtol=1e-9, atol=1e-9):
                raise PreconditionError("map is not positively homogeneous")


def _boundary_samples(norm, seed):
    rng = np.random.default_rng(seed)
    while True:
        x = tuple(Fraction(int(v)) for v in rng.integers(-20, 21, norm.dimension))
        if any(x):
            yield scale(1 / norm.value(x), x)


def illumination_check(g: MapExpr, norm: PolyhedralNorm, budget: int = 200, seed: int = 0) -> Certificate:
    """Semi-decision: displacement vectors ``g(w) - w`` illuminating every vertex
    of the unit ball prove that 0 is the only fixed point."""
    if g.dim != norm.dimension:
        raise PreconditionError("map and norm dimensions differ")
    _check_homogeneous(g, seed)
    vertices = list(norm.primal_vertices)
    dark = set(range(len(vertices)))
    used = []
    samples = iter(vertices)
    randoms = _boundary_samples(norm, seed)
    for k in range(budget):
        w = next(samples, None)
        if w is None:
            w = next(randoms)
        v = sub(evaluate(g, w, exact=True), w)
        hit = {i for i in dark if illuminates(norm, v, vertices[i])}
        if hit:
            used.append(w)
        dark -= hit
        if not dark:
            return Certificate(
                Verdict.UNIQUE, "illumination", None, [],
                {"samples_used": k + 1, "illuminating_points": [list(map(str, p)) for p in used]},
            )
    return Certificate(
        Verdict.INCONCLUSIVE, "illumination", None, [],
        {"samples_used": budget, "dark_vertices": [list(map(str, vertices[i])) for i in sorted(dark)]},
    )


@dataclass
class FaceLatticeMap:
    """``F -> F_{g(x_F)}`` on the proper faces; ``None`` stands for the whole ball."""

    g: MapExpr
    norm: PolyhedralNorm
    faces: list
    image: dict  # active set of F -> active set of the image (empty = whole ball)

    def image_face(self, face: FaceDescriptor):
        a = self.image[face.active]
        return self._by_active.get(a) if a else None

    @property
    def _by_active(self):
        return {f.active: f for f in self.faces}

    def order_violations(self) -> list:
        """Comparable pairs ``F <= G`` whose images are not comparable the same way."""
        bad = []
        for F in self.faces:
            for G in self.faces:
                if F is not G and F.active >= G.active:
                    if not self.image[F.active] >= self.image[G.active]:
                        bad.append((F.describe(), G.describe()))
        return bad

    def as_dict(self):
        by = self._by_active
        return {
            F.describe(): (by[self.image[F.active]].describe() if self.image[F.active] else "B1")
            for F in self.faces
        }


def face_lattice_map(g: MapExpr, norm: PolyhedralNorm) -> FaceLatticeMap:
    if g.dim != norm.dimension:
        raise PreconditionError("map and norm dimensions differ")
    faces = enumerate_proper_faces(norm)
    image = {}
    for F in faces:
        y = evaluate(g, F.representative, exact=True)
        r = norm.value(y)
        if r > 1:
            raise NonexpansivenessError(f"||g(x_F)|| = {r} > 1 on face {F.describe()}")
        image[F.active] = norm.active_set(y) if r == 1 else frozenset()
    return FaceLatticeMap(g, norm, faces, image)


def invariant_face_search(L: FaceLatticeMap) -> Certificate:
    """Look for a proper face mapped into itself, then confirm by its pairing slope."""
    table = []
    for F in L.faces:
        if L.image[F.active] >= F.active:
            s, slope, mode = _ray_sign(L.g, zeros(L.g.dim), F.representative, F.dual_representative)
            table.append(SlopeEntry(F.describe(), s or InitialSign.ZERO, slope, mode))
            if s is InitialSign.ZERO:
                return Certificate(
                    Verdict.NOT_UNIQUE, "face_lattice", FaceWitness(F, None, L.norm, kind="invariant_face"),
                    table, {"lattice": L.as_dict()},
                )
    return Certificate(Verdict.UNIQUE, "face_lattice", None, table, {"lattice": L.as_dict()})
