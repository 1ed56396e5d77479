import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nexcert.certify import certify_surjective
from nexcert.errors import NonexpansivenessError
from nexcert.gallery import example_sup_face, half, midpoint_map, shrink_sqrt
from nexcert.mapexpr import BlackBox, Constant, Identity, PointwiseMax, SignFlip, scaling
from nexcert.oracle import (
    BUDGET_EXHAUSTED,
    FIXED_POINT_FOUND,
    RESIDUAL_FLOOR,
    avoided_cone_samples,
    fdelta_boundedness_probe,
    minimal_displacement_estimate,
    multistart_fixed_points,
    random_targets,
)
from nexcert.polynorm import builtin_norm

sup1, sup2, sup3 = (builtin_norm("sup", n) for n in (1, 2, 3))


def test_constant_map_fixed_point_is_found():
    c = np.array([2.0, -3.0])
    rep = minimal_displacement_estimate(Constant((0, 0)), c, sup2)
    assert rep.verdict == FIXED_POINT_FOUND
    np.testing.assert_allclose(rep.point, c, atol=1e-7)


def test_absolute_value_has_a_residual_floor():
    absx = PointwiseMax(Identity(1), SignFlip(1, frozenset({0})))
    rep = minimal_displacement_estimate(absx, [1.0], sup1)
    assert rep.verdict == RESIDUAL_FLOOR and rep.residual >= 1 - 1e-9
    bb = BlackBox(1, lambda x: np.abs(x))
    assert minimal_displacement_estimate(bb, [1.0], sup1).residual >= 1 - 1e-9


def test_shrink_sqrt_target_is_reached():
    rep = minimal_displacement_estimate(shrink_sqrt(1), [-5.0], sup1, max_iter=200_000)
    assert rep.found


def test_residual_history_is_monotone_for_nonexpansive_maps():
    rep = minimal_displacement_estimate(half(3), [4.0, -1.0, 2.0], sup3, history_every=1)
    rs = [r for _, r in rep.history]
    assert all(b <= a + 1e-12 for a, b in zip(rs, rs[1:]))
    assert rep.monotone_violations == 0


def test_budget_exhausted_is_reported():
    rep = minimal_displacement_estimate(half(2), [1e6, 0.0], sup2, tol=1e-300, max_iter=5)
    assert rep.verdict == BUDGET_EXHAUSTED and rep.iterations == 5
    assert rep.as_dict()["heuristic"] is True


def test_blow_up_raises():
    with pytest.raises(NonexpansivenessError):
        minimal_displacement_estimate(scaling(1, 3), [1.0], sup1, max_iter=200)


def test_fdelta_probe():
    assert fdelta_boundedness_probe(half(2), sup2).bounded
    res = fdelta_boundedness_probe(Identity(2), sup2)
    assert res.kind == "UnboundedWitness" and res.residual == 0
    with pytest.raises(ValueError):
        fdelta_boundedness_probe(half(2), sup2, delta=0)


def test_multistart_counts_fixed_points():
    assert len(multistart_fixed_points(half(2), sup2, starts=8)) == 1
    assert len(multistart_fixed_points(midpoint_map(2), sup2, starts=8)) >= 2


def test_avoided_cone_samples_resist_iteration():
    f = example_sup_face(3, {1}, {2})
    w = certify_surjective(f, sup3).witness
    pts = avoided_cone_samples(sup3, w.face, w.cone_value, count=5, seed=1)
    apex = np.array([float(v) for v in w.face.representative]) * float(w.cone_value - 1)
    for z in pts:
        assert sup3.value(z - apex) <= 0.5 + 1e-12
        rep = minimal_displacement_estimate(f, -z, sup3, max_iter=20_000)
        assert not rep.found and rep.residual >= 0.5 - 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10_000))
def test_random_targets_are_bounded_and_seeded(n, seed):
    a, b = random_targets(n, 4, seed), random_targets(n, 4, seed)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert all(np.max(np.abs(x)) <= 10 for x in a)
