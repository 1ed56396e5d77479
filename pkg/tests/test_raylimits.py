from fractions import Fraction

import numpy as np
import pytest

from nexcert.errors import ContractBreachError
from nexcert.gallery import example_sup_face, random_sup_pwa, shrink_sqrt
from nexcert.mapexpr import BlackBox, Constant, Identity, Translate
from nexcert.polynorm import builtin_norm, enumerate_proper_faces
from nexcert.pwa import PwaFunction1D
from nexcert.raylimits import (
    InitialSign,
    NumericPolicy,
    Outcome,
    classify_limit_at_infinity,
    classify_limit_numeric,
    initial_sign,
    ray_limit,
    restrict_to_ray,
)

F = Fraction


def test_identity_pairing_is_zero():
    for face in enumerate_proper_faces(builtin_norm("sup", 2)):
        g = restrict_to_ray(Identity(2), (0, 0), face.representative, face.dual_representative)
        assert g.slopes == (0,) and g.intercepts == (0,)


def test_constant_zero_map_gives_minus_t():
    g = restrict_to_ray(Constant((0,)), (0,), (1,), (1,))
    assert (g.slopes, g.intercepts) == ((-1,), (0,))
    assert classify_limit_at_infinity(g).outcome is Outcome.MINUS_INFINITY


def test_fixed_ray_of_sup_face_map():
    x, xs = (0, 1, -1), (0, F(1, 2), F(-1, 2))
    g = restrict_to_ray(example_sup_face(3, {1}, {2}), (0, 0, 0), x, xs)
    assert set(g.slopes) == {0} and set(g.intercepts) == {0}
    v = classify_limit_at_infinity(g)
    assert v.finite and v.value == 0 and v.mode == "exact"
    assert initial_sign(g) is InitialSign.ZERO


def test_exact_classification():
    assert classify_limit_at_infinity(PwaFunction1D.affine(-1, 0)).diverges_down
    v = classify_limit_at_infinity(PwaFunction1D.constant(0))
    assert v.outcome is Outcome.FINITE and v.value == 0
    with pytest.raises(ContractBreachError):
        classify_limit_at_infinity(PwaFunction1D.affine(1, 0))


def test_numeric_examples():
    v = classify_limit_numeric(shrink_sqrt(1), (0,), (1,), (1,))
    assert v.outcome is Outcome.MINUS_INFINITY and v.mode == "numeric"
    v = classify_limit_numeric(Identity(1), (0,), (1,), (1,))
    assert v.outcome is Outcome.FINITE and v.value == 0
    v = classify_limit_numeric(Translate((-1,)), (0,), (1,), (1,))
    assert v.outcome is Outcome.FINITE and abs(v.value + 1) < 1e-12


def test_numeric_slow_divergence_is_inconclusive():
    slow = BlackBox(1, lambda x: x - np.log1p(np.abs(x)))
    v = classify_limit_numeric(slow, (0,), (1,), (1,))
    assert v.inconclusive


def test_numeric_increase_is_a_contract_breach():
    with pytest.raises(ContractBreachError):
        classify_limit_numeric(BlackBox(1, lambda x: 2 * x), (0,), (1,), (1,))


def test_policy_controls_the_schedule():
    short = NumericPolicy(max_doublings=10)
    v = classify_limit_numeric(shrink_sqrt(1), (0,), (1,), (1,), short)
    assert v.inconclusive


def test_ray_limit_falls_back_to_numeric():
    assert ray_limit(shrink_sqrt(1), (0,), (1,), (1,)).mode == "numeric"
    assert ray_limit(Identity(1), (0,), (1,), (1,)).mode == "exact"


def test_initial_sign_examples():
    assert initial_sign(PwaFunction1D.affine(F(-1, 2), 0)) is InitialSign.NEGATIVE
    assert initial_sign(PwaFunction1D.constant(0)) is InitialSign.ZERO
    with pytest.raises(ValueError):
        initial_sign(PwaFunction1D.constant(1))


def test_exact_and_numeric_limits_agree_on_random_maps():
    rng = np.random.default_rng(1234)
    compared = 0
    for k in range(1000):
        n = 2 + k % 3
        f = random_sup_pwa(n, rng, depth=2 + k % 2, homogeneous=bool(k % 2))
        zero = (0,) * n
        for face in enumerate_proper_faces(builtin_norm("sup", n)):
            a = ray_limit(f, zero, face.representative, face.dual_representative)
            b = classify_limit_numeric(f, zero, face.representative, face.dual_representative)
            assert a.mode == "exact" and not a.inconclusive
            if b.inconclusive:
                continue
            compared += 1
            assert a.outcome == b.outcome
            if a.finite:
                assert abs(float(a.value) - b.value) <= 1e-6 * max(1.0, abs(float(a.value)))
    assert compared > 20_000


def test_pairings_are_nonincreasing_from_any_base():
    rng = np.random.default_rng(5)
    norm = builtin_norm("sup", 3)
    faces = enumerate_proper_faces(norm)
    for _ in range(200):
        f = random_sup_pwa(3, rng, homogeneous=False)
        base = tuple(F(int(v), 2) for v in rng.integers(-10, 11, 3))
        face = faces[int(rng.integers(len(faces)))]
        g = restrict_to_ray(f, base, face.representative, face.dual_representative)
        assert g.is_nonincreasing()
