from fractions import Fraction

import numpy as np
import pytest

from nexcert.certificate import FinalClassesWitness, SubsetWitness, Verdict
from nexcert.certify import certify_surjective
from nexcert.errors import PreconditionError
from nexcert.gallery import min_clip, random_maxplus, random_minmax, random_subtopical
from nexcert.mapexpr import BOT, Identity, MaxPlus, MinMax, Permutation, Translate, normalize_topical, scaling
from nexcert.polynorm import builtin_norm, enumerate_proper_faces
from nexcert.raylimits import ray_limit
from nexcert.topical import (
    METHODS,
    DirectedGraph,
    HypergraphQuery,
    build_Ginf,
    certify_subtopical,
    certify_topical,
    final_classes,
    lower_limit,
    nonempty_subsets,
    reach,
    strongly_connected_components,
    upper_limit,
)

S, NS = Verdict.SURJECTIVE, Verdict.NOT_SURJECTIVE


def test_subtopical_half_is_surjective():
    cert = certify_subtopical(scaling(2, Fraction(1, 2)))
    assert cert.verdict is S and cert.limit_count == 6


def test_subtopical_min_clip_witness():
    cert = certify_subtopical(min_clip((1, 1)))
    assert cert.verdict is NS
    w = cert.witness
    assert isinstance(w, SubsetWitness) and w.subset == frozenset({0}) and w.sign == "-" and w.value == 0


def test_subtopical_constant_shift():
    cert = certify_subtopical(Translate((-1, -1)))
    assert cert.verdict is NS and cert.witness.value == -1


@pytest.mark.parametrize("n", range(1, 6))
def test_subtopical_budget(n):
    cert = certify_subtopical(random_subtopical(n, np.random.default_rng(n)))
    assert cert.limit_count == 2 * (2**n - 1)


def test_subtopical_precondition():
    with pytest.raises(PreconditionError):
        certify_subtopical(scaling(2, 2))


@pytest.mark.parametrize("method", METHODS)
def test_swap_is_surjective_by_every_method(method):
    assert certify_topical(Permutation((1, 0)), method).verdict is S


def test_identity_is_not_surjective():
    for method in ("hypergraph", "hypergraph_reach", "convex"):
        assert certify_topical(Identity(2), method).verdict is NS
    cert = certify_topical(Identity(2), "convex")
    assert isinstance(cert.witness, FinalClassesWitness)
    assert [sorted(c) for c in cert.witness.classes] == [[0], [1]]
    assert certify_topical(Identity(2), "strongly_connected_sufficient").verdict is Verdict.SUFFICIENT_ONLY


def test_upper_triangular_maxplus_is_not_surjective():
    T = MaxPlus(((0, 0), (BOT, 0)))
    for method in ("hypergraph", "hypergraph_reach", "convex"):
        assert certify_topical(T, method).verdict is NS
    assert certify_surjective(normalize_topical(T), builtin_norm("variation", 2)).verdict is NS


def test_convex_requires_flag():
    T = MinMax((((0, 1), (1, 0)), ((0, BOT),)))
    assert not T.convex
    with pytest.raises(PreconditionError):
        certify_topical(T, "convex")


def test_unknown_method():
    with pytest.raises(ValueError):
        certify_topical(Identity(2), "bogus")


def test_method_agreement_with_dual_reach():
    rng = np.random.default_rng(77)
    for k in range(60):
        n = 2 + k % 3
        T = random_minmax(n, rng) if k % 2 else random_maxplus(n, rng)
        verdicts = {certify_topical(T, m).verdict for m in ("hypergraph", "hypergraph_reach")}
        verdicts.add(certify_topical(T, "hypergraph_reach", dual=True).verdict)
        if T.convex:
            verdicts.add(certify_topical(T, "convex").verdict)
        assert len(verdicts) == 1
        if certify_topical(T, "strongly_connected_sufficient").verdict is S:
            assert verdicts == {S}


def test_face_limits_match_coordinate_limits():
    rng = np.random.default_rng(78)
    for k in range(30):
        n = 3 + k % 2
        T = random_minmax(n, rng) if k % 2 else random_maxplus(n, rng)
        f, norm = normalize_topical(T), builtin_norm("variation", n)
        for face in enumerate_proper_faces(norm):
            I, J = face.label
            lhs = ray_limit(f, (0,) * f.dim, face.representative, face.dual_representative).diverges_down
            rhs = lower_limit(T, I).diverges_down or upper_limit(T, J).diverges_up
            assert lhs == rhs


def test_hyperarcs_are_monotone_in_the_tail():
    rng = np.random.default_rng(79)
    for k in range(20):
        n = 4
        T = random_minmax(n, rng)
        for sign in "+-":
            H = HypergraphQuery(T, sign)
            for J in nonempty_subsets(n, proper=True):
                for i in range(n):
                    if i in J or not H.hyperarc(J, i):
                        continue
                    for Jp in nonempty_subsets(n, proper=True):
                        if Jp >= J and i not in Jp:
                            assert H.hyperarc(Jp, i)


def test_memo_is_reproducible():
    T = random_maxplus(4, np.random.default_rng(80))
    H = HypergraphQuery(T, "-")
    a = reach(H, {0})
    q = H.queries
    assert reach(H, {0}) == a and H.queries == q


def test_graph_helpers():
    G = DirectedGraph(3, frozenset({(0, 1), (1, 0), (2, 0)}))
    assert [sorted(c) for c in strongly_connected_components(G)] in ([[0, 1], [2]], [[2], [0, 1]])
    assert [sorted(c) for c in final_classes(G)] == [[0, 1]]
    assert G.is_invariant({0, 1}) and not G.is_invariant({2})
    assert "2 -> 0;" in G.to_dot()
    with pytest.raises(ValueError):
        DirectedGraph(2, frozenset({(0, 5)}))


def test_Ginf_of_swap():
    G = build_Ginf(Permutation((1, 0)))
    assert {(0, 1), (1, 0)} <= set(G.arcs) and G.is_strongly_connected()


def test_convex_budget_is_quadratic():
    rng = np.random.default_rng(81)
    for n in (2, 3, 4, 5, 6):
        for _ in range(5):
            cert = certify_topical(random_maxplus(n, rng), "convex")
            assert cert.details["coordinate_limits"] <= 4 * n * n


def test_subtopical_agrees_with_sup_face_test():
    rng = np.random.default_rng(82)
    for k in range(40):
        n = 2 + k % 3
        T = random_subtopical(n, rng)
        assert certify_subtopical(T).verdict == certify_surjective(T, builtin_norm("sup", n)).verdict
