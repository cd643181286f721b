"""Small builders shared by the test modules."""

from __future__ import annotations

import json
from importlib import resources

from drc.graphs import StableGraph, Weighting, is_simple_star
from drc.twists import Twist, parse_inline_edge_values, star_twist

EXAMPLE_G4_M = (-2, 5, 3, 12)
EXAMPLE_G4_K = 3
EXAMPLE_G4_TWIST = "[e0:3,e1:6,e2:3]"


def example_g4():
    """The genus-4 star with twists 3, 6 on the genus-2 vertex and 3 on the genus-1 one."""
    doc = json.loads(resources.files("drc").joinpath("data/example_g4_graph.json").read_text())
    graph = StableGraph.from_json(doc)
    weighting = Weighting(EXAMPLE_G4_M, EXAMPLE_G4_K)
    star = is_simple_star(graph, weighting)
    values = parse_inline_edge_values(EXAMPLE_G4_TWIST, graph.num_edges)
    return graph, weighting, star_twist(graph, star, weighting, values)


def star_graph(groups, k: int = 1, center_genus: int = 0, legs=(), m=None):
    """Star with one outlying vertex per group; each entry of a group is one
    edge with divided twist ``I'``. Outlying halves get ``k * I'``; legs get
    ``m`` when given."""
    edges, vals = [], []
    for v, group in enumerate(groups):
        for x in group:
            edges.append((0, v + 1))
            vals.append(x)
    graph = StableGraph.from_edges([center_genus] + [1] * len(groups), edges, list(legs))
    tw = [0] * graph.num_half_edges
    for (h, hp), x in zip(graph.edges, vals):
        tw[h], tw[hp] = -k * x, k * x
    for i, h in enumerate(graph.legs):
        tw[h] = m[i] if m is not None else 0
    return graph, Twist(tuple(tw), k)
