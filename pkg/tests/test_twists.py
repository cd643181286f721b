import pytest

from drc.errors import InputError
from drc.graphs import StableGraph, Weighting, is_simple_star
from drc.twists import (Twist, divided_edge_values, divided_twist, enumerate_positive_twists,
                        fp_sign_vanishing_check, parse_inline_edge_values, star_twist,
                        validate_twist)

from helpers import EXAMPLE_G4_K, EXAMPLE_G4_M, example_g4
from oracles import positive_twists_bruteforce


def test_example_g4_twist_is_valid():
    graph, weighting, twist = example_g4()
    assert validate_twist(graph, weighting, twist).valid
    assert fp_sign_vanishing_check(graph, twist)
    star = is_simple_star(graph, weighting)
    assert divided_edge_values(graph, star, twist) == (1, 2, 1)
    with pytest.raises(InputError):
        divided_twist(twist)  # legs -2 and 5 are not divisible by 3
    assert divided_twist(Twist((6, -3, 3), 3)).values == (2, -1, 1)


@pytest.mark.parametrize("genera,edges,legs,m,k", [
    ([0, 2, 1], [(0, 1), (0, 1), (0, 2)], [0, 0, 1, 0], EXAMPLE_G4_M, EXAMPLE_G4_K),
    ([0, 2, 1], [(0, 1), (0, 1), (0, 2)], [0, 0, 0, 0], EXAMPLE_G4_M, EXAMPLE_G4_K),
    ([0, 3], [(0, 1)] * 2, [0, 0], (7, -1), 1),
    ([0, 2, 2], [(0, 1), (0, 2), (0, 2)], [0, 1], (-3, 3), 1),
    ([1, 1, 1], [(0, 1), (0, 2)], [0, 0], (9, -1), 2),
])
def test_positive_twists_match_bruteforce(genera, edges, legs, m, k):
    graph = StableGraph.from_edges(genera, edges, legs)
    weighting = Weighting(tuple(m), k)
    star = is_simple_star(graph, weighting)
    assert star is not None
    got = {t.values for t in enumerate_positive_twists(graph, weighting, star)}
    assert got == set(positive_twists_bruteforce(graph, m, k, star.center))


def test_validate_twist_reports_each_failure():
    graph, weighting, twist = example_g4()
    vals = list(twist.values)
    vals[0] += 1           # leg 1
    vals[4] += 1           # breaks the edge (4, 5) and vertex sums
    report = validate_twist(graph, weighting, Twist(tuple(vals), 3))
    assert not report.valid
    assert report.leg_failures == [1]
    assert report.edge_failures == [(4, 5)]
    assert report.vertex_failures


def test_sign_cycle_detected():
    # both edges of a 2-cycle point the same way around it
    graph = StableGraph.from_edges([0, 1], [(0, 1), (0, 1)], [0, 0])
    star = is_simple_star(graph, Weighting((-1, 1), 1))
    twist = star_twist(graph, star, Weighting((-1, 1), 1), [1, -1])
    assert not fp_sign_vanishing_check(graph, twist)


def test_inline_parser():
    assert parse_inline_edge_values("[e0:3,e1:6,e2:3]", 3) == [3, 6, 3]
    assert parse_inline_edge_values("e1:2, e0:-4", 2) == [-4, 2]
    for bad in ("[e0:3,e2:3]", "[x0:3]", "[e0:3"):
        with pytest.raises(InputError):
            parse_inline_edge_values(bad, 2)


def test_divided_requires_divisibility():
    with pytest.raises(InputError):
        divided_twist(Twist((1, -1), 3))


def test_twist_json_round_trip():
    _, _, twist = example_g4()
    assert Twist.from_json(twist.to_json(), 3) == twist
    with pytest.raises(InputError):
        Twist.from_json({"half_edge_values": {"0": 1, "2": 1}}, 1)
