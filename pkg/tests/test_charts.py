import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from drc.charts import ToricChart, chart_digest, chart_equation_system, gvar, i_gamma
from drc.errors import InputError
from drc.graphs import StableGraph, betti1
from drc.twists import Twist

from helpers import example_g4, star_graph


def _evaluate(mono, point):
    out = Fraction(1)
    for var, e in mono:
        out *= point[var] ** e
    return out


def test_example_g4_equations():
    graph, _, twist = example_g4()
    chart = ToricChart(graph, twist)
    assert [str(q) for q in chart.essential_system()] == ["a_g0 * a_g1 = 1",
                                                          "a_e0 * a_g1 = a_e1^2"]
    assert chart.lci_witness_check()
    digest = chart_digest(graph, twist)
    assert digest["b1"] == digest["independent_cycle_variables"] == 1
    assert digest["lci"] is True


def test_cycle_exponent_convention():
    # leaving along e0 gives +I(e0); coming back along e1 gives -I(e1)
    graph, twist = star_graph(((2, 5),))
    c = next(c for c in ToricChart(graph, twist).cycles if graph.edge_of(c[0]) == graph.edges[0][0])
    assert i_gamma(graph, c, graph.edges[0][0], twist) == 2
    assert i_gamma(graph, c, graph.edges[1][0], twist) == -5


def test_divided_and_undivided_exponents_scale_by_k():
    for k in (1, 2, 3):
        graph, twist = star_graph(((1, 2), (3, 1, 1)), k=k)
        div = ToricChart(graph, twist, divided=True)
        full = ToricChart(graph, twist, divided=False)
        assert [{e: k * x for e, x in d.items()} for d in div.exponents] == full.exponents


def test_undivisible_twist_rejected_when_divided():
    graph = StableGraph.from_edges([0, 1], [(0, 1), (0, 1)], [])
    twist = Twist((-1, 1, -2, 2), 2)
    with pytest.raises(InputError):
        ToricChart(graph, twist, divided=True)
    ToricChart(graph, twist, divided=False)


def test_non_star_rejected_by_lci_check():
    chain = StableGraph.from_edges([1, 0, 1], [(0, 1), (1, 2), (0, 1)], [])
    twist = Twist((-1, 1, -1, 1, -1, 1), 1)
    with pytest.raises(InputError):
        ToricChart(chain, twist).lci_witnesses()


@pytest.mark.parametrize("groups", [((1,),), ((1, 2, 3),), ((2, 2), (1, 4, 3)),
                                    ((4, 4, 4), (1,), (2, 3))])
def test_homology_rank_and_free_variables(groups):
    graph, twist = star_graph(groups)
    chart = ToricChart(graph, twist)
    assert chart.homology_rank() == betti1(graph) == chart.independent_cycle_variables()
    assert len(chart.basis) == betti1(graph)


@pytest.mark.parametrize("groups", [((1, 2, 3),), ((2, 1), (1, 4, 3)), ((3, 3), (2, 2))])
def test_all_equations_vanish_at_a_torus_point(groups):
    """Put ``a_gamma = prod a_e^{I'_gamma(e)}``; every Psi_f must vanish there."""
    graph, twist = star_graph(groups)
    chart = ToricChart(graph, twist)
    rng = random.Random(len(groups))
    point = {("e", j): Fraction(rng.randint(1, 9), rng.randint(1, 9))
             for j in range(len(chart.edges))}
    for i, exps in enumerate(chart.exponents):
        val = Fraction(1)
        for e, x in exps.items():
            val *= point[("e", chart.edge_index[e])] ** x
        point[gvar(i)] = val
    system = chart_equation_system(graph, twist, bound=2)
    for q in system["essential"] + system["audit"]:
        assert _evaluate(q.lhs, point) == _evaluate(q.rhs, point), str(q)


def test_audit_family_has_no_sign_duplicates():
    graph, _, twist = example_g4()
    audit = ToricChart(graph, twist).audit_system(2)
    flows = [q.flow for q in audit]
    assert len(flows) == len(set(flows)) == 6
    negated = {tuple((i, -c) for i, c in f) for f in flows}
    assert not negated & set(flows)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(1, 4), min_size=1, max_size=3), min_size=1, max_size=3),
       st.data())
def test_sum_consequence_identity(groups, data):
    graph, twist = star_graph(groups)
    chart = ToricChart(graph, twist)
    n = len(chart.cycles)
    if n == 0:
        return
    flow = st.dictionaries(st.integers(0, n - 1), st.integers(-2, 2), max_size=3)
    f1, f2 = data.draw(flow), data.draw(flow)
    assert chart.sum_consequence_residual(f1, f2).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(1, 5), min_size=1, max_size=3), min_size=1, max_size=3),
       st.integers(1, 3))
def test_lci_holds_for_random_stars(groups, k):
    graph, twist = star_graph(groups, k=k)
    chart = ToricChart(graph, twist)
    assert chart.lci_witness_check()
    assert chart.independent_cycle_variables() == betti1(graph)
