from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nexcert.errors import DimensionError, ResourceLimitError
from nexcert.exact import dot, scale, sub, vec
from nexcert.polynorm import (
    builtin_norm,
    custom_norm,
    enumerate_proper_faces,
    face_gap,
    face_of_point,
    illuminates,
)


@pytest.mark.parametrize("kind", ["sup", "one"])
@pytest.mark.parametrize("n", range(1, 7))
def test_face_count_sup_and_l1(kind, n):
    assert len(enumerate_proper_faces(builtin_norm(kind, n))) == 3**n - 1


@pytest.mark.parametrize("n", range(2, 6))
def test_face_count_variation(n):
    assert len(enumerate_proper_faces(builtin_norm("variation", n))) == 3**n - 2 * 2**n + 1


def _check_representatives(norm):
    faces = enumerate_proper_faces(norm)
    assert len({F.active for F in faces}) == len(faces)
    for F in faces:
        x = F.representative
        assert norm.value(x) == 1
        for k, nu in enumerate(norm.dual_extreme_points):
            if k in F.active:
                assert dot(x, nu) == 1
            else:
                assert dot(x, nu) < 1
        pts = [norm.dual_extreme_points[k] for k in sorted(F.active)]
        centroid = tuple(sum(c) / len(pts) for c in zip(*pts))
        assert F.dual_representative == centroid
        assert face_gap(norm, F) < 1


@pytest.mark.parametrize("kind,n", [("sup", 3), ("one", 3), ("sup", 4), ("variation", 4)])
def test_representatives_sit_in_relative_interior(kind, n):
    _check_representatives(builtin_norm(kind, n))


def test_sup_labels_match_closed_form():
    norm = builtin_norm("sup", 3)
    for F in enumerate_proper_faces(norm):
        I, J = F.label
        eIJ = tuple(Fraction(1 if i in I else -1 if i in J else 0) for i in range(3))
        assert F.representative == eIJ
        assert F.dual_representative == scale(Fraction(1, len(I) + len(J)), eIJ)


def test_describe_uses_zero_based_labels():
    F = next(F for F in enumerate_proper_faces(builtin_norm("sup", 3)) if F.label == (frozenset({1}), frozenset({2})))
    assert F.describe() == "({1},{2})"


def test_hexagon_custom_norm():
    hexagon = custom_norm([(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)])
    faces = enumerate_proper_faces(hexagon)
    assert len(faces) == 12
    _check_representatives(hexagon)
    assert hexagon.value((1, 1)) == 2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=9, max_size=9))
def test_linear_image_of_sup_ball_keeps_face_lattice(entries):
    M = np.array(entries).reshape(3, 3)
    if round(np.linalg.det(M)) == 0:
        return
    pts = [tuple(int(v) for v in M.T @ np.array(p)) for p in product((0, 1, -1), repeat=3) if sum(map(abs, p)) == 1]
    norm = custom_norm(pts)
    assert len(enumerate_proper_faces(norm)) == 26
    _check_representatives(norm)


def test_custom_norm_rejections():
    with pytest.raises(ValueError):
        custom_norm([(1, 0), (-1, 0)])  # does not span
    with pytest.raises(ValueError):
        custom_norm([(1, 0), (0, 1), (-1, 0)])  # not symmetric
    with pytest.raises(ValueError):
        custom_norm([(1, 0), (0, 1), (-1, 0), (0, -1), (Fraction(1, 2), 0), (Fraction(-1, 2), 0)])
    with pytest.raises(DimensionError):
        builtin_norm("sup", 0)


def test_custom_enumeration_cap():
    norm = custom_norm([tuple(1 if j == i else 0 for j in range(7)) for i in range(7)]
                       + [tuple(-1 if j == i else 0 for j in range(7)) for i in range(7)])
    with pytest.raises(ResourceLimitError):
        enumerate_proper_faces(norm)


def test_illumination_examples():
    sup2 = builtin_norm("sup", 2)
    assert illuminates(sup2, (-1, -1), (1, 1))
    assert not illuminates(sup2, (-1, 0), (1, 1))
    for w in sup2.primal_vertices + ((1, 0), (0, -1)):
        assert not illuminates(sup2, (0, 0), w)
    with pytest.raises(ValueError):
        illuminates(sup2, (-1, -1), (2, 2))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(["sup", "one", "variation"]), st.data())
def test_scaled_distance_identity(kind, data):
    norm = builtin_norm(kind, 3)
    faces = enumerate_proper_faces(norm)
    F = data.draw(st.sampled_from(faces))
    c = face_gap(norm, F)
    R = Fraction(data.draw(st.integers(1, 100)), data.draw(st.integers(1, 7)))
    r = (1 - c) * R / 2 * Fraction(data.draw(st.integers(0, 20)), 20)
    for y in norm.face_vertices(F):
        assert norm.value(sub(scale(R, F.representative), scale(r, y))) == R - r


def test_float_and_exact_norm_values_agree():
    norm = builtin_norm("one", 3)
    x = vec(("1/3", "-2", "5/7"))
    assert abs(norm.value([float(v) for v in x]) - float(norm.value(x))) < 1e-12


def test_variation_chart_round_trip():
    norm = builtin_norm("variation", 4)
    x = vec((3, -1, 0, -2))
    v = norm.chart(x)
    assert norm.lift(v) == x
    assert norm.value(v) == 5
    with pytest.raises(ValueError):
        norm.chart((1, 0, 0, 0))


def test_face_of_point():
    norm = builtin_norm("sup", 3)
    F = face_of_point(norm, (2, -2, 1))
    assert F.label == (frozenset({0}), frozenset({1}))
