import json

import pytest

from curvedainf.constructions import obstructed_problems, solvable_problems
from curvedainf.errors import InvariantError, ParseError
from curvedainf.moduli import GeometrySpec, SphereClass
from curvedainf.properties import standard_cones
from curvedainf.ring import PowerSeries
from curvedainf.serialization import (algebra_from_doc, algebra_to_doc, cone_from_doc, cone_to_doc,
                                      dumps, geometry_from_doc, geometry_to_doc, problem_from_doc,
                                      problem_to_doc, result_from_doc, result_to_doc,
                                      series_from_doc, series_to_doc)
from curvedainf.transfer import transfer_mc

PROBLEMS = solvable_problems(12, seed=3) + obstructed_problems()


@pytest.mark.parametrize("cone", standard_cones())
def test_cone_round_trip(cone):
    assert cone_from_doc(json.loads(dumps(cone_to_doc(cone)))) == cone


def test_series_round_trip_with_big_coefficients():
    cone = standard_cones()[1]
    s = PowerSeries(cone, 5, {(0, 1): 10**30, (2, -1): -7, (0, 0): 1})
    doc = json.loads(dumps(series_to_doc(s)))
    assert series_from_doc(doc, cone) == s


@pytest.mark.parametrize("p", PROBLEMS, ids=lambda p: p.label)
def test_problem_round_trip(p):
    text = dumps(problem_to_doc(p))
    back = problem_from_doc(json.loads(text))
    assert back.A == p.A and back.B == p.B and back.M == p.M
    assert back.m0 == p.m0 and back.b == p.b and back.label == p.label
    assert dumps(problem_to_doc(back)) == text


def test_algebra_round_trip():
    alg = PROBLEMS[0].A
    assert algebra_from_doc(json.loads(dumps(algebra_to_doc(alg)))) == alg


def test_result_round_trip():
    p = PROBLEMS[1]
    r = transfer_mc(p.A, p.B, p.M, p.m0, p.b)
    text = dumps(result_to_doc(r, p.A, p.M))
    back = result_from_doc(json.loads(text), p.A, p.M)
    assert back.a == r.a and back.m == r.m and back.order_achieved == r.order_achieved
    assert dumps(result_to_doc(back, p.A, p.M)) == text


def test_geometry_round_trip():
    g = GeometrySpec(3, ("p", "q"), (SphereClass("L", 1, (1, 0), (frozenset(), frozenset({1}))),),
                     q0=frozenset({0}), divisor_weights=((1, 0), (0, 1)))
    assert geometry_from_doc(json.loads(dumps(geometry_to_doc(g)))) == g


def test_malformed_documents():
    with pytest.raises(ParseError):
        geometry_from_doc({"divisors": []})
    with pytest.raises(ParseError):
        cone_from_doc({"p_count": 2})
    with pytest.raises(InvariantError):
        geometry_from_doc({"n": 2, "divisors": ["p"], "classes": [{"name": "A", "c1": -1, "intersections": [0]}]})


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")
