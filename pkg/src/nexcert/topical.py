"""Surjectivity tests specialised to subtopical and topical maps.

Coordinate limits ``T_i(+-t e_J)`` are monotone in ``t`` for order-preserving
maps, so each is evaluated once and memoised.  Hypergraphs are never built in
full; invariance and reach only query the hyperarcs they need.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .certificate import (
    Certificate,
    FinalClassesWitness,
    LimitEntry,
    PairWitness,
    ReachWitness,
    SubsetWitness,
    Verdict,
)
from .errors import InconclusiveLimitError, PreconditionError
from .exact import unit, zeros
from .mapexpr import MapExpr
from .raylimits import DEFAULT_POLICY, LimitVerdict, NumericPolicy, Outcome, ray_limit

METHODS = ("hypergraph", "hypergraph_reach", "convex", "strongly_connected_sufficient")


def nonempty_subsets(n: int, proper: bool = False):
    """Nonempty subsets of range(n) by size, then lexicographically."""
    top = n - 1 if proper else n
    for k in range(1, top + 1):
        for c in itertools.combinations(range(n), k):
            yield frozenset(c)


def _fmt_set(s) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def coordinate_limit(T: MapExpr, sign: str, J, i: int, policy: NumericPolicy = DEFAULT_POLICY) -> LimitVerdict:
    """Limit of ``T_i(t e_J)`` (sign ``+``) or ``T_i(-t e_J)`` (sign ``-``)."""
    n = T.dim
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    d = unit(n, J, 1 if sign == "+" else -1)
    expect = "nondecreasing" if sign == "+" else "nonincreasing"
    return ray_limit(T, zeros(n), d, unit(n, [i]), policy, displacement=False, expect=expect)


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    arcs: frozenset

    def __post_init__(self):
        if any(not (0 <= i < self.n and 0 <= j < self.n) for i, j in self.arcs):
            raise ValueError("arc endpoint out of range")

    def successors(self, i: int) -> list:
        return sorted(j for a, j in self.arcs if a == i)

    def is_invariant(self, nodes) -> bool:
        s = set(nodes)
        return not any(i in s and j not in s for i, j in self.arcs)

    def is_strongly_connected(self) -> bool:
        return len(strongly_connected_components(self)) == 1

    def to_dot(self, name: str = "Ginf") -> str:
        lines = [f"digraph {name} {{"]
        lines += [f"  {i};" for i in range(self.n)]
        lines += [f"  {i} -> {j};" for i, j in sorted(self.arcs)]
        lines.append("}")
        return "\n".join(lines) + "\n"


class HypergraphQuery:
    """Lazy view of H+ (sign ``+``) or H- (sign ``-``) with a memo table.

    ``limit(J, i)`` may be asked for any ``i``; ``hyperarc(J, i)`` requires
    ``i`` outside ``J``.
    """

    def __init__(self, T: MapExpr, sign: str, policy: NumericPolicy = DEFAULT_POLICY):
        self.T = T
        self.sign = sign
        self.policy = policy
        self.memo: dict = {}
        self.order: list = []

    @property
    def queries(self) -> int:
        return len(self.memo)

    def limit(self, J, i: int) -> LimitVerdict:
        key = (frozenset(J), i)
        if key not in self.memo:
            self.memo[key] = coordinate_limit(self.T, self.sign, key[0], i, self.policy)
            self.order.append(key)
        return self.memo[key]

    def hyperarc(self, J, i: int) -> bool:
        if i in J:
            raise ValueError("hyperarc head must lie outside the tail")
        v = self.limit(J, i)
        if v.inconclusive:
            raise InconclusiveLimitError(f"coordinate limit {self.sign}{_fmt_set(J)}->{i} inconclusive", v)
        return v.diverges_up if self.sign == "+" else v.diverges_down

    def entries(self) -> list:
        return [
            LimitEntry(f"T_{i}({self.sign}t e_{_fmt_set(J)})", self.memo[(J, i)])
            for J, i in self.order
        ]

    def queried_hyperarcs(self) -> list:
        return [(J, i) for J, i in self.order if i not in J and self.hyperarc(J, i)]


def is_invariant(H: HypergraphQuery, I) -> bool:
    I = frozenset(I)
    return not any(H.hyperarc(I, j) for j in range(H.T.dim) if j not in I)


def reach(H: HypergraphQuery, I) -> frozenset:
    """Smallest invariant superset of ``I``, by closure."""
    S = set(I)
    n = H.T.dim
    changed = True
    while changed:
        changed = False
        for j in range(n):
            if j not in S and H.hyperarc(frozenset(S), j):
                S.add(j)
                changed = True
    return frozenset(S)


def build_Ginf(T: MapExpr, policy: NumericPolicy = DEFAULT_POLICY, query: HypergraphQuery | None = None) -> DirectedGraph:
    """Arc ``i -> j`` iff ``T_i(t e_j) -> +inf``; diagonal arcs included."""
    H = query or HypergraphQuery(T, "+", policy)
    arcs = set()
    for i in range(T.dim):
        for j in range(T.dim):
            v = H.limit(frozenset([j]), i)
            if v.inconclusive:
                raise InconclusiveLimitError(f"G_inf arc {i}->{j} inconclusive", v)
            if v.diverges_up:
                arcs.add((i, j))
    return DirectedGraph(T.dim, frozenset(arcs))


def strongly_connected_components(G: DirectedGraph) -> list:
    if G.n == 0:
        return []
    rows = [i for i, _ in G.arcs]
    cols = [j for _, j in G.arcs]
    m = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(G.n, G.n))
    _, labels = connected_components(m, directed=True, connection="strong")
    comps: dict = {}
    for node, lab in enumerate(labels):
        comps.setdefault(lab, set()).add(node)
    return sorted((frozenset(c) for c in comps.values()), key=min)


def final_classes(G: DirectedGraph) -> list:
    """Strongly connected components with no arc leaving them, by least node."""
    return [c for c in strongly_connected_components(G) if G.is_invariant(c)]


# -- certifiers ---------------------------------------------------------------


def _require(flag: bool, assume: bool, what: str):
    if not (flag or assume):
        raise PreconditionError(f"map is not flagged {what}; pass assume=True to override")


def certify_subtopical(T: MapExpr, policy: NumericPolicy = DEFAULT_POLICY, assume: bool = False) -> Certificate:
    """All ``2(2^n - 1)`` limits ``<T(+-t e_I), e_I> -+ t|I|`` must diverge."""
    _require(T.subtopical, assume, "subtopical")
    n = T.dim
    table, witness, inconclusive = [], None, False
    for I in nonempty_subsets(n):
        e = unit(n, I)
        for sign, d, expect in (("+", e, "nonincreasing"), ("-", unit(n, I, -1), "nondecreasing")):
            v = ray_limit(T, zeros(n), d, e, policy, displacement=True, expect=expect)
            table.append(LimitEntry(f"{sign}{_fmt_set(I)}", v))
            ok = v.diverges_down if sign == "+" else v.diverges_up
            if v.inconclusive:
                inconclusive = True
            elif not ok and witness is None:
                witness = SubsetWitness(I, sign, v.value)
    if witness is not None:
        verdict = Verdict.NOT_SURJECTIVE
    elif inconclusive:
        verdict = Verdict.INCONCLUSIVE
    else:
        verdict = Verdict.SURJECTIVE
    return Certificate(verdict, "subtopical_limits", witness, table, {"n": n, "expected_limits": 2 * (2**n - 1)})


def certify_topical(
    T: MapExpr,
    method: str = "hypergraph",
    policy: NumericPolicy = DEFAULT_POLICY,
    assume: bool = False,
    dual: bool = False,
) -> Certificate:
    """Does ``T + u`` have an additive eigenvector for every ``u``?"""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    _require(T.topical, assume, "topical")
    if method == "convex":
        _require(T.convex, False, "convex")
    if T.dim < 2:
        # every vector is an eigenvector in dimension one
        return Certificate(Verdict.SURJECTIVE, method, None, [], {"n": T.dim})
    try:
        if method == "hypergraph":
            return _by_pairs(T, policy)
        if method == "hypergraph_reach":
            return _by_reach(T, policy, dual)
        if method == "convex":
            return _by_convex(T, policy)
        return _by_strong_connectivity(T, policy)
    except InconclusiveLimitError as exc:
        entries = [LimitEntry("inconclusive", exc.verdict)] if exc.verdict is not None else []
        return Certificate(Verdict.INCONCLUSIVE, method, None, entries, {"reason": str(exc)})


def lower_limit(T, I, policy=DEFAULT_POLICY) -> LimitVerdict:
    """``lim <T(-t e_{I^c}), e_I>``."""
    n = T.dim
    comp = [k for k in range(n) if k not in I]
    return ray_limit(T, zeros(n), unit(n, comp, -1), unit(n, I), policy, displacement=False, expect="nonincreasing")


def upper_limit(T, J, policy=DEFAULT_POLICY) -> LimitVerdict:
    """``lim <T(t e_{J^c}), e_J>``."""
    n = T.dim
    comp = [k for k in range(n) if k not in J]
    return ray_limit(T, zeros(n), unit(n, comp), unit(n, J), policy, displacement=False, expect="nondecreasing")


def _by_pairs(T, policy):
    n = T.dim
    subsets = list(nonempty_subsets(n, proper=True))
    low = {I: lower_limit(T, I, policy) for I in subsets}
    up = {J: upper_limit(T, J, policy) for J in subsets}
    table = [LimitEntry(f"lower{_fmt_set(I)}", v) for I, v in low.items()]
    table += [LimitEntry(f"upper{_fmt_set(J)}", v) for J, v in up.items()]
    witness, inconclusive = None, False
    for I in subsets:
        for J in subsets:
            if I & J:
                continue
            a, b = low[I], up[J]
            if a.diverges_down or b.diverges_up:
                continue
            if a.inconclusive or b.inconclusive:
                inconclusive = True
                continue
            witness = PairWitness(I, J, {"lower": a.value, "upper": b.value})
            break
        if witness:
            break
    verdict = (
        Verdict.NOT_SURJECTIVE if witness else Verdict.INCONCLUSIVE if inconclusive else Verdict.SURJECTIVE
    )
    return Certificate(verdict, "hypergraph", witness, table, {"n": n})


def _by_reach(T, policy, dual):
    n = T.dim
    everything = frozenset(range(n))
    H = HypergraphQuery(T, "+" if dual else "-", policy)
    table, witness = [], None
    for J in nonempty_subsets(n, proper=True):
        v = lower_limit(T, J, policy) if dual else upper_limit(T, J, policy)
        table.append(LimitEntry(f"{'lower' if dual else 'upper'}{_fmt_set(J)}", v))
        if (v.diverges_down if dual else v.diverges_up):
            continue
        if v.inconclusive:
            raise InconclusiveLimitError(f"limit for {_fmt_set(J)} inconclusive", v)
        R = reach(H, J)
        if R != everything:
            witness = ReachWitness(J, R, {"limit": v.value, "hypergraph": "H+" if dual else "H-"})
            break
    table += H.entries()
    verdict = Verdict.NOT_SURJECTIVE if witness else Verdict.SURJECTIVE
    return Certificate(
        verdict, "hypergraph_reach_dual" if dual else "hypergraph_reach", witness, table,
        {"n": n, "hyperarc_queries": H.queries},
    )


def _by_convex(T, policy):
    n = T.dim
    plus = HypergraphQuery(T, "+", policy)
    minus = HypergraphQuery(T, "-", policy)
    G = build_Ginf(T, policy, plus)
    classes = final_classes(G)
    details = {"n": n, "final_classes": [sorted(c) for c in classes]}
    if len(classes) != 1:
        cert = Certificate(Verdict.NOT_SURJECTIVE, "convex", FinalClassesWitness(classes[:2]), [], details)
    else:
        C = classes[0]
        R = reach(minus, C)
        details["reach"] = sorted(R)
        if R == frozenset(range(n)):
            cert = Certificate(Verdict.SURJECTIVE, "convex", None, [], details)
        else:
            cert = Certificate(Verdict.NOT_SURJECTIVE, "convex", ReachWitness(C, R), [], details)
    cert.limit_table = plus.entries() + minus.entries()
    cert.details["coordinate_limits"] = plus.queries + minus.queries
    return cert


def _by_strong_connectivity(T, policy):
    H = HypergraphQuery(T, "+", policy)
    G = build_Ginf(T, policy, H)
    comps = strongly_connected_components(G)
    details = {"n": T.dim, "components": [sorted(c) for c in comps]}
    verdict = Verdict.SURJECTIVE if len(comps) == 1 else Verdict.SUFFICIENT_ONLY
    return Certificate(verdict, "strongly_connected_sufficient", None, H.entries(), details)


def hypergraph_dot(H: HypergraphQuery, name: str | None = None) -> str:
    """Queried hyperarcs drawn through one auxiliary node per hyperarc."""
    name = name or ("Hplus" if H.sign == "+" else "Hminus")
    lines = [f"digraph {name} {{"]
    lines += [f"  {i};" for i in range(H.T.dim)]
    for k, (J, i) in enumerate(H.queried_hyperarcs()):
        lines.append(f'  h{k} [shape=point, label=""];')
        lines += [f"  {j} -> h{k} [arrowhead=none];" for j in sorted(J)]
        lines.append(f"  h{k} -> {i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
