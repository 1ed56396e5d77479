"""Certificates: verdict, method, witness and the table of every limit used."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .exact import fmt, fmt_vec, scale
from .polynorm import FaceDescriptor, PolyhedralNorm
from .raylimits import LimitVerdict

SCHEMA_VERSION = "1.0"


class Verdict(str, enum.Enum):
    SURJECTIVE = "Surjective"
    NOT_SURJECTIVE = "NotSurjective"
    UNIQUE = "Unique"
    NOT_UNIQUE = "NotUnique"
    SUFFICIENT_ONLY = "SufficientOnly"
    INCONCLUSIVE = "Inconclusive"


def _set(s):
    return sorted(int(i) for i in s)


@dataclass
class FaceWitness:
    """A face whose limit is finite (or whose ray is invariant).

    ``value`` is the limit against the dual representative.  ``cone_value``
    is the least limit against the active dual extreme points; it bounds the
    limit below on the whole dual face, so the range of ``f - id`` misses the
    open cone ``{w : <w, nu> < 0 for every active nu} + cone_value x_F``.
    """

    face: FaceDescriptor
    value: object = None
    norm: PolyhedralNorm | None = None
    kind: str = "failing_face"
    cone_value: object = None

    def cone_apex(self):
        return scale(self.cone_value, self.face.representative) if self.cone_value is not None else None

    def as_dict(self):
        out = {
            "kind": self.kind,
            "face": self.face.describe(),
            "active": _set(self.face.active),
            "representative": fmt_vec(self.face.representative),
            "dual_representative": fmt_vec(self.face.dual_representative),
        }
        if self.value is not None:
            out["value"] = fmt(self.value)
        if self.cone_value is not None:
            out["cone_value"] = fmt(self.cone_value)
            out["cone_apex"] = fmt_vec(self.cone_apex())
        if self.norm is not None:
            out["cone_normals"] = [fmt_vec(self.norm.dual_extreme_points[k]) for k in sorted(self.face.active)]
        return out


@dataclass
class SubsetWitness:
    """A subset ``I`` with the sign of the ray ``+-t e_I`` that failed."""

    subset: frozenset
    sign: str
    value: object = None
    kind: str = "subset"

    def as_dict(self):
        out = {"kind": self.kind, "subset": _set(self.subset), "sign": self.sign}
        if self.value is not None:
            out["value"] = fmt(self.value)
        return out


@dataclass
class PairWitness:
    """Disjoint sets ``(I, J)`` for which neither coordinate limit diverges."""

    first: frozenset
    second: frozenset
    details: dict = field(default_factory=dict)
    kind: str = "pair"

    def as_dict(self):
        out = {"kind": self.kind, "I": _set(self.first), "J": _set(self.second)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


@dataclass
class ReachWitness:
    """A set ``J`` with a finite limit whose reach is not everything."""

    subset: frozenset
    reach: frozenset
    details: dict = field(default_factory=dict)
    kind: str = "reach"

    def as_dict(self):
        out = {"kind": self.kind, "J": _set(self.subset), "reach": _set(self.reach)}
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


@dataclass
class FinalClassesWitness:
    classes: list
    kind: str = "final_classes"

    def as_dict(self):
        return {"kind": self.kind, "classes": [_set(c) for c in self.classes]}


def _jsonable(v):
    if isinstance(v, (frozenset, set)):
        return _set(v)
    if isinstance(v, LimitVerdict):
        return v.as_dict()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "numerator") and hasattr(v, "denominator") and not isinstance(v, int):
        return fmt(v)
    return v


@dataclass
class LimitEntry:
    key: str
    verdict: LimitVerdict
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        out = {"key": self.key}
        out.update(self.verdict.as_dict())
        out.update({k: _jsonable(v) for k, v in self.extra.items()})
        return out


@dataclass
class Certificate:
    verdict: Verdict
    method: str
    witness: object = None
    limit_table: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def limit_count(self) -> int:
        return len(self.limit_table)

    def failing_keys(self) -> list:
        return [e.key for e in self.limit_table if not e.verdict.diverges_down]

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict.value,
            "method": self.method,
            "witness": self.witness.as_dict() if self.witness is not None else None,
            "limit_count": self.limit_count,
            "limit_table": [e.as_dict() for e in self.limit_table],
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, **kw)
