from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nexcert.pwa import PwaFunction1D, pwa_max, pwa_min

F = Fraction


def test_affine_pieces():
    g = PwaFunction1D.affine(-2, 3)
    assert g(F(5)) == -7
    assert g.final_slope == -2 and g.initial_slope == -2 and g.piece_count == 1


def test_discontinuity_rejected():
    with pytest.raises(ValueError):
        PwaFunction1D((F(0), F(1)), (F(0), F(0)), (F(0), F(1)))
    with pytest.raises(ValueError):
        PwaFunction1D((F(1),), (F(0),), (F(0),))


def test_max_and_min_create_breakpoints():
    a = PwaFunction1D.affine(1, 0)
    b = PwaFunction1D.constant(2)
    m = pwa_max(a, b)
    assert m.starts == (0, 2) and m(F(1)) == 2 and m(F(5)) == 5
    n = pwa_min(a, b)
    assert n.final_slope == 0 and n.final_intercept == 2


def _affines():
    return st.builds(PwaFunction1D.affine, st.integers(-5, 5), st.integers(-5, 5))


@settings(max_examples=100, deadline=None)
@given(st.lists(_affines(), min_size=1, max_size=5), st.lists(_affines(), min_size=1, max_size=5),
       st.fractions(min_value=0, max_value=20))
def test_operations_match_pointwise(fs, gs, t):
    f = fs[0]
    for h in fs[1:]:
        f = pwa_max(f, h)
    g = gs[0]
    for h in gs[1:]:
        g = pwa_min(g, h)
    assert f(t) == max(h(t) for h in fs)
    assert g(t) == min(h(t) for h in gs)
    assert (f + g)(t) == f(t) + g(t)
    assert (f - g)(t) == f(t) - g(t)
    assert (f * F(3, 2))(t) == F(3, 2) * f(t)
    assert (f / 4)(t) == f(t) / 4
    assert (-f)(t) == -f(t)
    assert list(f.slopes) == sorted(f.slopes)  # max of affines is convex
