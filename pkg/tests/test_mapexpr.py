from fractions import Fraction

import numpy as np
import pytest

from nexcert.errors import DimensionError, MalformedMapError, NotPiecewiseAffineError
from nexcert.exact import add, vec
from nexcert.gallery import (
    example_sup_face,
    random_maxplus,
    random_minmax,
    random_subtopical,
    random_sup_pwa,
    shrink_sqrt,
)
from nexcert.mapexpr import (
    BOT,
    Affine,
    BlackBox,
    Clip,
    Identity,
    MaxPlus,
    Permutation,
    check_nonexpansive,
    compose,
    evaluate,
    normalize_topical,
    scaling,
)
from nexcert.polynorm import builtin_norm

F = Fraction


def test_maxplus_row_maxima():
    assert evaluate(MaxPlus(((0, 0), (BOT, 0))), (3, 5)) == (5, 5)


def test_all_bottom_row_rejected():
    with pytest.raises(MalformedMapError):
        MaxPlus(((0, BOT), (BOT, BOT)))


def test_sup_face_map_fixes_its_ray():
    f = example_sup_face(3, {1}, {2})
    for t in (F(1, 3), F(1), F(7)):
        x = (0, t, -t)
        assert evaluate(f, x) == vec(x)


def test_shrink_sqrt_values():
    f = shrink_sqrt(1)
    assert evaluate(f, (4,)) == (2,)
    assert evaluate(f, (F(1, 2),)) == (0,)
    assert abs(evaluate(f, (2.0,))[0] - (2 - np.sqrt(2))) < 1e-15
    with pytest.raises(NotPiecewiseAffineError):
        evaluate(f, (2,), exact=True)
    assert not f.pwa and not compose(Identity(1), f).pwa


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        evaluate(Identity(3), (1, 2))


def test_normalize_identity_and_swap():
    f = normalize_topical(Identity(2))
    assert f.dim == 1 and evaluate(f, (F(5, 2),)) == (F(5, 2),)  # zero displacement on the chart
    g = normalize_topical(Permutation((1, 0)))
    assert evaluate(g, (3,)) == (-3,)


def test_normalize_of_all_zero_maxplus_is_zero():
    f = normalize_topical(MaxPlus(((0, 0), (0, 0))))
    for v in (-2, 0, 5):
        assert evaluate(f, (v,)) == (0,)


def test_normalize_rejects_non_topical():
    with pytest.raises(MalformedMapError):
        normalize_topical(scaling(2, F(1, 2)))


def test_nonexpansive_reports():
    sup3 = builtin_norm("sup", 3)
    assert check_nonexpansive(example_sup_face(3, {0}, {1}), sup3).verdict == "guaranteed"
    assert check_nonexpansive(random_maxplus(3, np.random.default_rng(0)), sup3).verdict == "guaranteed"
    rep = check_nonexpansive(scaling(3, 2), sup3, samples=100)
    assert rep.verdict == "violated" and rep.mode == "sampled"
    x, y = rep.witness
    fx, fy = evaluate(scaling(3, 2), x), evaluate(scaling(3, 2), y)
    assert sup3.value(tuple(a - b for a, b in zip(fx, fy))) > sup3.value(tuple(a - b for a, b in zip(x, y)))


def test_affine_operator_norm_flag():
    sup2 = builtin_norm("sup", 2)
    assert check_nonexpansive(Affine(((F(1, 2), F(-1, 2)), (0, 1))), sup2).verdict == "guaranteed"
    assert check_nonexpansive(Affine(((1, 1), (0, 1))), sup2).verdict == "violated"


def test_normalized_topical_is_variation_guaranteed():
    T = random_minmax(4, np.random.default_rng(2))
    assert check_nonexpansive(normalize_topical(T), builtin_norm("variation", 4)).verdict == "guaranteed"


def test_blackbox_is_sampled():
    bb = BlackBox(2, lambda x: np.minimum(x, 0))
    rep = check_nonexpansive(bb, builtin_norm("sup", 2))
    assert rep.mode == "sampled" and rep.verdict == "consistent"


def test_exact_and_float_evaluation_agree():
    rng = np.random.default_rng(10)
    points = 0
    for k in range(50):
        n = 2 + k % 3
        f = random_sup_pwa(n, rng, homogeneous=bool(k % 2)) if k % 3 else random_subtopical(n, rng)
        for _ in range(200):
            x = tuple(F(int(v), int(d)) for v, d in zip(rng.integers(-500, 501, n), rng.integers(1, 9, n)))
            ex = evaluate(f, x, exact=True)
            fl = evaluate(f, [float(v) for v in x], exact=False)
            for a, b in zip(ex, fl):
                assert abs(float(a) - b) <= 1e-12 * max(1.0, abs(float(a)))
            points += 1
    assert points == 10_000


def test_topical_flag_implies_order_preservation_and_homogeneity():
    rng = np.random.default_rng(11)
    for k in range(40):
        n = 3 + k % 2
        T = random_maxplus(n, rng) if k % 2 else random_minmax(n, rng)
        assert T.topical
        x = tuple(F(int(v), 3) for v in rng.integers(-30, 31, n))
        d = tuple(F(int(v), 5) for v in rng.integers(0, 20, n))
        t = F(int(rng.integers(-20, 21)), 7)
        Tx, Ty = evaluate(T, x), evaluate(T, add(x, d))
        assert all(a <= b for a, b in zip(Tx, Ty))
        assert evaluate(T, tuple(v + t for v in x)) == tuple(v + t for v in Tx)


def test_flags_of_constructors():
    f = example_sup_face(3, {0}, {1})
    assert f.pwa and f.homogeneous and not f.order_preserving
    assert MaxPlus(((0, 1), (BOT, 0))).convex
    assert random_subtopical(3, np.random.default_rng(3)).subtopical


def test_symbolic_recession():
    assert evaluate(shrink_sqrt(1).recession(), (5,)) == (5,)
    assert evaluate(shrink_sqrt(1).recession(), (-5,)) == (0,)
    rec = Clip(2, frozenset({0})).recession()
    assert evaluate(rec, (F(-1), F(3))) == (0, 0)
