"""Twists on leg-weighted graphs.

A twist assigns an integer to every half-edge.  On a simple star the
*edge value* ``I(e)`` of an edge is the value at its outlying half; positive
twists have every edge value a positive multiple of ``k``.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import InputError
from .graphs import StableGraph, StarShape, Weighting, canonical_degree, is_simple_star

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Twist:
    values: tuple  # indexed by half-edge, legs included
    k: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))

    def __getitem__(self, h):
        return self.values[h]

    def __len__(self):
        return len(self.values)

    def to_json(self) -> dict:
        return {"half_edge_values": {str(h): v for h, v in enumerate(self.values)}}

    @classmethod
    def from_json(cls, doc: dict, k: int) -> "Twist":
        vals = doc["half_edge_values"]
        idx = sorted(int(h) for h in vals)
        if idx != list(range(len(idx))):
            raise InputError("twist must give a value for every half-edge 0..#H-1")
        return cls(tuple(vals[str(h)] for h in idx), k)


@dataclass
class TwistReport:
    valid: bool
    leg_failures: list = field(default_factory=list)     # legs with I(l) != m(l)
    edge_failures: list = field(default_factory=list)    # edges with I(h) + I(h') != 0
    vertex_failures: list = field(default_factory=list)  # (v, sum, k*can(v))


def validate_twist(graph: StableGraph, weighting: Weighting, twist: Twist) -> TwistReport:
    vals = twist.values
    legs = [i + 1 for i, h in enumerate(graph.legs) if vals[h] != weighting.m[i]]
    edges = [(h, hp) for h, hp in graph.edges if vals[h] + vals[hp] != 0]
    verts = []
    for v in range(graph.num_vertices):
        total = sum(vals[h] for h in graph.half_edges_at(v))
        want = weighting.k * canonical_degree(graph, v)
        if total != want:
            verts.append((v, total, want))
    return TwistReport(not (legs or edges or verts), legs, edges, verts)


def outlying_half(graph: StableGraph, star: StarShape, edge: tuple) -> int:
    h, hp = edge
    return hp if graph.ends[h] == star.center else h


def edge_values(graph: StableGraph, star: StarShape, twist: Twist) -> tuple:
    """``I(e)`` for every edge (in edge-id order), read at the outlying half."""
    return tuple(twist[outlying_half(graph, star, e)] for e in graph.edges)


def star_twist(graph: StableGraph, star: StarShape, weighting: Weighting,
               values: Sequence[int]) -> Twist:
    """Twist with the given outlying-half edge values and legs set to ``m``."""
    tw = [0] * graph.num_half_edges
    for i, h in enumerate(graph.legs):
        tw[h] = weighting.m[i]
    for e, val in zip(graph.edges, values):
        out = outlying_half(graph, star, e)
        tw[out] = val
        tw[graph.involution[out]] = -val
    return Twist(tuple(tw), weighting.k)


def _compositions(total: int, parts: int):
    """Compositions of ``total`` into ``parts`` positive integers, lex order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_positive_twists(graph: StableGraph, weighting: Weighting,
                              star: Optional[StarShape] = None) -> list:
    if star is None:
        star = is_simple_star(graph, weighting)
        if star is None:
            raise InputError("graph is not a simple star for this weighting")
    k = weighting.k
    per_vertex = []
    for v in star.outlying:
        leg_sum = 0
        for i in graph.markings_at(v):
            if weighting.is_bad(i):
                log.info("outlying vertex %d carries bad leg %d; no positive twists", v, i)
                return []
            leg_sum += weighting.m[i - 1]
        edges = [j for j, e in enumerate(graph.edges) if graph.ends[outlying_half(graph, star, e)] == v]
        total = k * canonical_degree(graph, v) - leg_sum
        if total % k:
            return []
        per_vertex.append((edges, list(_compositions(total // k, len(edges)))))
    twists = []
    for choice in itertools.product(*(opts for _, opts in per_vertex)):
        values = [0] * graph.num_edges
        for (edges, _), comp in zip(per_vertex, choice):
            for j, a in zip(edges, comp):
                values[j] = k * a
        tw = star_twist(graph, star, weighting, values)
        report = validate_twist(graph, weighting, tw)
        assert report.valid, report
        twists.append(tw)
    twists.sort(key=lambda t: edge_values(graph, star, t))
    return twists


def divided_edge_values(graph: StableGraph, star: StarShape, twist: Twist) -> tuple:
    vals = edge_values(graph, star, twist)
    bad = [v for v in vals if v % twist.k]
    if bad:
        raise InputError(f"edge twists {bad} not divisible by k = {twist.k}")
    return tuple(v // twist.k for v in vals)


def divided_twist(twist: Twist) -> Twist:
    """``I' = I / k`` on every half-edge (legs included)."""
    bad = [v for v in twist.values if v % twist.k]
    if bad:
        raise InputError(f"twist values {bad} not divisible by k = {twist.k}")
    return Twist(tuple(v // twist.k for v in twist.values), 1)


def fp_sign_vanishing_check(graph: StableGraph, twist: Twist) -> bool:
    """True iff no directed cycle has all ``I(h) >= 0`` and some ``I(h) > 0``.

    Such a cycle exists exactly when some directed edge ``h`` with
    ``I(h) > 0`` has its source reachable from its target along directed
    edges with nonnegative twist.
    """
    nonneg = [[] for _ in range(graph.num_vertices)]
    for h in range(graph.num_half_edges):
        if not graph.is_leg(h) and twist[h] >= 0:
            nonneg[graph.ends[h]].append(graph.target(h))
    for h in range(graph.num_half_edges):
        if graph.is_leg(h) or twist[h] <= 0:
            continue
        # a self-loop with I(h) > 0 is itself such a cycle
        start, goal = graph.target(h), graph.ends[h]
        seen, stack = {start}, [start]
        while stack:
            u = stack.pop()
            if u == goal:
                return False
            for w in nonneg[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return True


def enumerate_twists_bounded(graph: StableGraph, weighting: Weighting, bound: int) -> list:
    """All twists with ``|I(h)| <= bound`` on edges; brute force.

    ``Tw`` is an affine lattice and infinite in general, so a bound is
    required.
    """
    found = []
    for vals in itertools.product(range(-bound, bound + 1), repeat=graph.num_edges):
        tw = [0] * graph.num_half_edges
        for i, h in enumerate(graph.legs):
            tw[h] = weighting.m[i]
        for (h, hp), x in zip(graph.edges, vals):
            tw[h], tw[hp] = x, -x
        t = Twist(tuple(tw), weighting.k)
        if validate_twist(graph, weighting, t).valid:
            found.append(t)
    return found


_INLINE = re.compile(r"^\[?\s*((?:e\d+\s*:\s*-?\d+\s*,?\s*)*)\]?$")


def parse_inline_edge_values(spec: str, num_edges: int) -> list:
    """Parse ``"[e0:3,e1:3,e2:6]"`` into per-edge values (edge index order)."""
    if not _INLINE.match(spec.strip()):
        raise InputError(f"malformed twist spec {spec!r}")
    vals = {}
    for idx, val in re.findall(r"e(\d+)\s*:\s*(-?\d+)", spec):
        vals[int(idx)] = int(val)
    if sorted(vals) != list(range(num_edges)):
        raise InputError(f"twist spec must give e0..e{num_edges - 1}, got {sorted(vals)}")
    return [vals[i] for i in range(num_edges)]
