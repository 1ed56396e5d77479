import json
from fractions import Fraction

import numpy as np
import pytest

from nexcert.errors import ProblemFileError
from nexcert.gallery import example_sup_face, half, random_sup_pwa
from nexcert.mapexpr import MaxPlus, evaluate
from nexcert.polynorm import builtin_norm, custom_norm
from nexcert.raylimits import NumericPolicy
from nexcert.serialize import ProblemFile, dumps_norm, loads_norm, loads_problem, parse_rational


def test_problem_round_trip():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p = ProblemFile(random_sup_pwa(3, rng), {"type": "unique", "u": (0, 0, 0)}, builtin_norm("sup", 3), seed=7)
        q = loads_problem(p.dumps())
        assert q.to_dict() == p.to_dict()
        x = (Fraction(1, 3), -2, 5)
        assert evaluate(q.map, x, exact=True) == evaluate(p.map, x, exact=True)


def test_custom_norm_round_trip():
    hexagon = custom_norm([(1, 0), (0, 1), (-1, 0), (0, -1), (1, -1), (-1, 1)])
    back = loads_norm(dumps_norm(hexagon))
    assert sorted(back.dual_extreme_points) == sorted(hexagon.dual_extreme_points)


def test_rational_spellings():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational([3, 4]) == Fraction(3, 4)
    assert parse_rational("0.1") == Fraction(1, 10)
    assert parse_rational(2) == 2
    with pytest.raises(ValueError):
        parse_rational([1, 0])


def test_json_floats_are_exact():
    text = json.dumps({"map": {"op": "constant", "value": [0.1, 1]}, "query": {"type": "surjective"}})
    p = loads_problem(text)
    assert evaluate(p.map, (0, 0), exact=True)[0] == Fraction(1, 10)


def test_bot_entries():
    text = '{"map": {"op": "maxplus", "matrix": [[0, 0], ["bot", 0]]}, "query": {"type": "topical"}}'
    p = loads_problem(text)
    assert isinstance(p.map, MaxPlus) and p.map.order_preserving
    assert loads_problem(p.dumps()).to_dict() == p.to_dict()


def test_unknown_field_points_at_it():
    text = '{\n  "map": {"op": "identity", "n": 2},\n  "query": {"type": "surjective"},\n  "colour": 1\n}'
    with pytest.raises(ProblemFileError) as exc:
        loads_problem(text)
    assert exc.value.line == 4 and exc.value.column == 3


def test_unknown_constructor_and_query():
    with pytest.raises(ProblemFileError, match="constructor"):
        loads_problem('{"map": {"op": "spin"}, "query": {"type": "surjective"}}')
    with pytest.raises(ProblemFileError, match="query type"):
        loads_problem('{"map": {"op": "identity", "n": 1}, "query": {"type": "maybe"}}')
    with pytest.raises(ProblemFileError, match="unknown field"):
        loads_problem('{"map": {"op": "identity", "n": 1, "m": 2}, "query": {"type": "surjective"}}')


def test_malformed_json_has_position():
    with pytest.raises(ProblemFileError) as exc:
        loads_problem('{"map": ')
    assert exc.value.line == 1


def test_policy_fields():
    text = json.dumps({
        "map": {"op": "identity", "n": 1}, "query": {"type": "surjective"},
        "policy": {"max_doublings": 20, "noise_tol": 1e-5},
    })
    p = loads_problem(text)
    assert p.policy == NumericPolicy(max_doublings=20, noise_tol=1e-5)
    with pytest.raises(ProblemFileError):
        loads_problem(text.replace("noise_tol", "noise"))


def test_schema_version_is_checked():
    text = '{"schema_version": "9", "map": {"op": "identity", "n": 1}, "query": {"type": "surjective"}}'
    with pytest.raises(ProblemFileError, match="schema"):
        loads_problem(text)


def test_sup_face_map_serializes():
    f = example_sup_face(3, {0}, {1, 2})
    p = ProblemFile(f, {"type": "surjective"}, builtin_norm("sup", 3))
    q = loads_problem(p.dumps())
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = tuple(Fraction(int(v)) for v in rng.integers(-9, 9, 3))
        assert evaluate(q.map, x, exact=True) == evaluate(f, x, exact=True)
