"""JSON problem files and norm files.

Rationals are written as integers, ``"p/q"`` strings, decimal strings or
``[p, q]`` integer pairs; JSON floats are read through their decimal text so
``0.1`` means exactly 1/10.  Unknown fields are errors.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .errors import CertifierError, ProblemFileError
from .exact import frac
from .mapexpr import (
    Affine,
    Clip,
    Constant,
    ConvexCombination,
    Identity,
    MapExpr,
    MaxPlus,
    MinMax,
    Normalize,
    Permutation,
    PointwiseMax,
    PointwiseMin,
    ShrinkSqrt,
    SignFlip,
    Translate,
    compose,
    scaling,
)
from .polynorm import PolyhedralNorm, builtin_norm, custom_norm
from .raylimits import NumericPolicy

SCHEMA_VERSION = "1.0"

QUERY_TYPES = {
    "surjective": set(),
    "unique": {"u"},
    "unique_subtopical": {"u"},
    "eigenvector": {"u"},
    "topical": {"method", "dual"},
    "subtopical": set(),
    "recession": set(),
    "semiderivative": {"u"},
    "illumination": {"budget", "seed"},
    "face_lattice": set(),
}


@dataclass
class ProblemFile:
    map: MapExpr
    query: dict
    norm: PolyhedralNorm | None = None
    policy: NumericPolicy = field(default_factory=NumericPolicy)
    seed: int = 0
    assume_nonexpansive: bool = False

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "map": self.map.to_dict(),
            "query": _query_to_dict(self.query),
            "seed": self.seed,
        }
        if self.norm is not None:
            out["norm"] = norm_to_dict(self.norm)
        if self.policy != NumericPolicy():
            out["policy"] = self.policy.as_dict()
        if self.assume_nonexpansive:
            out["assume_nonexpansive"] = True
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _query_to_dict(q):
    out = dict(q)
    if "u" in out:
        out["u"] = [str(frac(v)) for v in out["u"]]
    return out


class _Ctx:
    """Error helper that points at the first occurrence of a key in the text."""

    def __init__(self, text: str):
        self.text = text

    def fail(self, message, key=None):
        line = col = None
        if key is not None and self.text:
            pos = self.text.find(f'"{key}"')
            if pos >= 0:
                line = self.text.count("\n", 0, pos) + 1
                col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise ProblemFileError(message, line, col)

    def only(self, obj, allowed, where):
        if not isinstance(obj, dict):
            self.fail(f"{where} must be an object")
        for k in obj:
            if k not in allowed:
                self.fail(f"unknown field {k!r} in {where}", k)

    def need(self, obj, key, where):
        if key not in obj:
            self.fail(f"missing field {key!r} in {where}")
        return obj[key]


def parse_rational(v):
    if isinstance(v, list):
        if len(v) != 2 or not all(isinstance(p, int) and not isinstance(p, bool) for p in v) or v[1] == 0:
            raise ValueError(f"bad integer pair {v!r}")
        return Fraction(v[0], v[1])
    return frac(v)


def _rat(ctx, v, key):
    try:
        return parse_rational(v)
    except (TypeError, ValueError, ZeroDivisionError):
        ctx.fail(f"not a rational number: {v!r}", key)


def _vec(ctx, v, key):
    if not isinstance(v, list):
        ctx.fail(f"{key} must be a list", key)
    return tuple(_rat(ctx, x, key) for x in v)


def _entry(ctx, v, key):
    if isinstance(v, str) and v.strip().lower() == "bot":
        return None
    if v is None:
        return None
    return _rat(ctx, v, key)


def _ints(ctx, v, key):
    if not isinstance(v, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in v):
        ctx.fail(f"{key} must be a list of integers", key)
    return v


_MAP_FIELDS = {
    "identity": {"n"},
    "constant": {"value"},
    "permutation": {"sigma"},
    "signflip": {"n", "flip"},
    "clip": {"n", "clip", "keep"},
    "translate": {"shift"},
    "scaling": {"n", "factor"},
    "compose": {"maps"},
    "max": {"args"},
    "min": {"args"},
    "convex": {"weight", "args"},
    "affine": {"matrix", "offset"},
    "maxplus": {"matrix"},
    "minmax": {"rows"},
    "shrink_sqrt": {"n", "coordinate"},
    "normalize": {"map"},
}


def map_from_dict(d, ctx: _Ctx | None = None) -> MapExpr:
    ctx = ctx or _Ctx("")
    if not isinstance(d, dict):
        ctx.fail("map must be an object")
    op = ctx.need(d, "op", "map")
    if op not in _MAP_FIELDS:
        ctx.fail(f"unknown map constructor {op!r}", "op")
    ctx.only(d, _MAP_FIELDS[op] | {"op"}, f"map '{op}'")
    try:
        return _build_map(op, d, ctx)
    except ProblemFileError:
        raise
    except (CertifierError, ValueError, TypeError) as exc:
        ctx.fail(f"invalid '{op}' map: {exc}", op)


def _build_map(op, d, ctx):
    g = lambda k: ctx.need(d, k, f"map '{op}'")  # noqa: E731
    sub = lambda v: map_from_dict(v, ctx)  # noqa: E731
    if op == "identity":
        return Identity(int(g("n")))
    if op == "constant":
        return Constant(_vec(ctx, g("value"), "value"))
    if op == "permutation":
        return Permutation(tuple(_ints(ctx, g("sigma"), "sigma")))
    if op == "signflip":
        return SignFlip(int(g("n")), frozenset(_ints(ctx, g("flip"), "flip")))
    if op == "clip":
        return Clip(int(g("n")), frozenset(_ints(ctx, g("clip"), "clip")), frozenset(_ints(ctx, d.get("keep", []), "keep")))
    if op == "translate":
        return Translate(_vec(ctx, g("shift"), "shift"))
    if op == "scaling":
        return scaling(int(g("n")), _rat(ctx, g("factor"), "factor"))
    if op in ("compose", "max", "min", "convex"):
        key = "maps" if op == "compose" else "args"
        items = g(key)
        if not isinstance(items, list) or not items:
            ctx.fail(f"{key} must be a nonempty list", key)
        parts = [sub(v) for v in items]
        if op == "compose":
            return compose(*parts)
        if op == "max":
            return reduce(PointwiseMax, parts)
        if op == "min":
            return reduce(PointwiseMin, parts)
        if len(parts) != 2:
            ctx.fail("convex needs exactly two args", "args")
        return ConvexCombination(parts[0], parts[1], _rat(ctx, d.get("weight", "1/2"), "weight"))
    if op == "affine":
        m = g("matrix")
        if not isinstance(m, list):
            ctx.fail("matrix must be a list of rows", "matrix")
        rows = tuple(_vec(ctx, r, "matrix") for r in m)
        off = _vec(ctx, d["offset"], "offset") if "offset" in d else None
        return Affine(rows, off)
    if op == "maxplus":
        m = g("matrix")
        if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
            ctx.fail("matrix must be a list of rows", "matrix")
        return MaxPlus(tuple(tuple(_entry(ctx, v, "matrix") for v in r) for r in m))
    if op == "minmax":
        rows = g("rows")
        if not isinstance(rows, list):
            ctx.fail("rows must be a list", "rows")
        return MinMax(tuple(tuple(tuple(_entry(ctx, v, "rows") for v in r) for r in block) for block in rows))
    if op == "shrink_sqrt":
        return ShrinkSqrt(int(g("n")), int(d.get("coordinate", 0)))
    return Normalize(sub(g("map")))


def norm_to_dict(norm: PolyhedralNorm) -> dict:
    if norm.kind == "variation":
        return {"kind": "variation", "n": norm.ambient}
    if norm.kind in ("sup", "one"):
        return {"kind": norm.kind, "n": norm.dimension}
    return {
        "kind": "custom",
        "dual_extreme_points": [[[v.numerator, v.denominator] for v in p] for p in norm.dual_extreme_points],
    }


def norm_from_dict(d, ctx: _Ctx | None = None) -> PolyhedralNorm:
    ctx = ctx or _Ctx("")
    if not isinstance(d, dict):
        ctx.fail("norm must be an object")
    kind = ctx.need(d, "kind", "norm")
    try:
        if kind in ("sup", "one", "variation"):
            ctx.only(d, {"kind", "n"}, "norm")
            return builtin_norm(kind, int(ctx.need(d, "n", "norm")))
        if kind == "custom":
            ctx.only(d, {"kind", "dual_extreme_points"}, "norm")
            pts = ctx.need(d, "dual_extreme_points", "norm")
            if not isinstance(pts, list):
                ctx.fail("dual_extreme_points must be a list", "dual_extreme_points")
            return custom_norm([_vec(ctx, p, "dual_extreme_points") for p in pts])
    except ProblemFileError:
        raise
    except (CertifierError, ValueError) as exc:
        ctx.fail(f"invalid norm: {exc}", "norm")
    ctx.fail(f"unknown norm kind {kind!r}", "kind")


def dumps_norm(norm: PolyhedralNorm) -> str:
    return json.dumps(norm_to_dict(norm), sort_keys=True)


def loads_norm(text: str) -> PolyhedralNorm:
    ctx = _Ctx(text)
    return norm_from_dict(_json(text), ctx)


def _json(text):
    try:
        return json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"malformed JSON: {exc.msg}", exc.lineno, exc.colno) from None


_POLICY_FIELDS = set(NumericPolicy().as_dict())
_TOP_FIELDS = {"schema_version", "norm", "map", "query", "policy", "seed", "assume_nonexpansive"}


def loads_problem(text: str) -> ProblemFile:
    ctx = _Ctx(text)
    d = _json(text)
    ctx.only(d, _TOP_FIELDS, "problem")
    ver = d.get("schema_version", SCHEMA_VERSION)
    if ver != SCHEMA_VERSION:
        ctx.fail(f"unsupported schema version {ver!r}", "schema_version")
    fmap = map_from_dict(ctx.need(d, "map", "problem"), ctx)
    norm = norm_from_dict(d["norm"], ctx) if "norm" in d else None
    q = ctx.need(d, "query", "problem")
    if not isinstance(q, dict):
        ctx.fail("query must be an object", "query")
    qtype = ctx.need(q, "type", "query")
    if qtype not in QUERY_TYPES:
        ctx.fail(f"unknown query type {qtype!r}", "type")
    ctx.only(q, QUERY_TYPES[qtype] | {"type"}, "query")
    query = dict(q)
    if "u" in query:
        query["u"] = _vec(ctx, query["u"], "u")
    pol = d.get("policy", {})
    ctx.only(pol, _POLICY_FIELDS, "policy")
    try:
        policy = NumericPolicy(**{k: (int(v) if k in ("max_doublings", "stable_steps") else float(v)) for k, v in pol.items()})
    except (TypeError, ValueError) as exc:
        ctx.fail(f"invalid policy: {exc}", "policy")
    seed = d.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        ctx.fail("seed must be an integer", "seed")
    assume = d.get("assume_nonexpansive", False)
    if not isinstance(assume, bool):
        ctx.fail("assume_nonexpansive must be a boolean", "assume_nonexpansive")
    return ProblemFile(fmap, query, norm, policy, seed, assume)


def load_problem(path) -> ProblemFile:
    with open(path, encoding="utf-8") as fh:
        return loads_problem(fh.read())
