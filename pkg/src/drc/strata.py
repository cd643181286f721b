"""Boundary strata of twisted k-differentials and their class coefficients.

A stratum is a simple star graph with a positive twist.  The decomposition
for ``(g, m, k)`` lists every isomorphism class of such pairs together with
the interior term (the single-vertex graph, coefficient 1).
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .errors import GuardOverflow, InputError, InvariantError
from .graphs import (DEFAULT_GUARD, SizeGuard, StableGraph, StarShape, Weighting,
                     betti1, canonical_form, canonical_form_and_automorphisms, is_simple_star,
                     key_hex)
from .twists import (Twist, divided_edge_values, edge_values, enumerate_positive_twists,
                     outlying_half, validate_twist)

log = logging.getLogger(__name__)


class Case(str, enum.Enum):
    K_ZERO = "K_ZERO"
    K1_ALL_NONNEG = "K1_ALL_NONNEG"
    K_GT1_ALL_DIV_NONNEG = "K_GT1_ALL_DIV_NONNEG"
    GENERIC = "GENERIC"


def classify_case(g: int, m: Sequence[int], k: int) -> Case:
    if k < 0:
        raise InputError(f"k must be nonnegative, got {k}")
    if sum(m) != k * (2 * g - 2):
        raise InputError(f"weights sum to {sum(m)} but k(2g-2) = {k * (2 * g - 2)} "
                         f"(discrepancy {sum(m) - k * (2 * g - 2)})")
    if k == 0:
        return Case.K_ZERO
    if all(x >= 0 and x % k == 0 for x in m):
        return Case.K1_ALL_NONNEG if k == 1 else Case.K_GT1_ALL_DIV_NONNEG
    return Case.GENERIC


@dataclass(frozen=True)
class VertexStratumLabel:
    vertex: int
    genus: int
    order: int  # k at the centre, 1 at outlying vertices
    signature: tuple

    def __str__(self):
        return f"H^{self.order}_{self.genus}({','.join(map(str, self.signature))})"

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "genus": self.genus, "order": self.order,
                "signature": list(self.signature)}


@dataclass(frozen=True)
class DecoratedStratum:
    graph: StableGraph
    weighting: Weighting
    twist: Twist
    star: StarShape

    @property
    def k(self) -> int:
        return self.weighting.k

    @property
    def interior(self) -> bool:
        return self.graph.num_vertices == 1 and self.graph.num_edges == 0

    @property
    def formal_term(self) -> bool:
        # non-emptiness of the vertex strata is never certified here
        return True

    @cached_property
    def _iso(self) -> tuple:
        return canonical_form_and_automorphisms(self.graph, self.twist.values)

    @property
    def key(self) -> tuple:
        return self._iso[0]

    @property
    def key_hex(self) -> str:
        return key_hex(self.key)

    @property
    def aut_order(self) -> int:
        return self._iso[1]

    @cached_property
    def edge_values(self) -> tuple:
        return edge_values(self.graph, self.star, self.twist)

    @cached_property
    def divided_values(self) -> tuple:
        return divided_edge_values(self.graph, self.star, self.twist)

    @property
    def weight(self) -> Fraction:
        return stratum_weight(self)

    @property
    def fp_coefficient(self) -> Fraction:
        return fp_coefficient(self)

    @property
    def vertex_labels(self) -> list:
        return vertex_labels(self)


def stratum_weight(s: DecoratedStratum) -> Fraction:
    """``prod I(e) / k^(#V - 1)``, checked against ``k^b1 * prod I'(e)``."""
    w = Fraction(math.prod(s.edge_values), s.k ** (s.graph.num_vertices - 1))
    alt = s.k ** betti1(s.graph) * math.prod(s.divided_values)
    if w != alt:
        raise InvariantError(f"weight {w} != k^b1 prod I' = {alt} for {s.key_hex[:12]}")
    return w


def fp_coefficient(s: DecoratedStratum) -> Fraction:
    return Fraction(math.prod(s.edge_values), s.aut_order * s.k ** len(s.star.outlying))


def vertex_labels(s: DecoratedStratum) -> list:
    """Signatures of the vertex strata.

    Centre: leg weights, then ``I(h) - k`` at each node half (``I(h) < 0``).
    Outlying: ``m/k`` on legs, then ``I(h)/k - 1`` at each node half.
    """
    g, tw, k = s.graph, s.twist, s.k
    labels = []
    for v in (s.star.center,) + s.star.outlying:
        legs = [s.weighting.m[i - 1] for i in g.markings_at(v)]
        halves = sorted(h for h in g.edge_halves_at(v))
        if v == s.star.center:
            sig = tuple(legs) + tuple(tw[h] - k for h in halves)
            order = k
        else:
            sig = tuple(x // k for x in legs) + tuple(tw[h] // k - 1 for h in halves)
            order = 1
        if sum(sig) != order * (2 * g.genera[v] - 2):
            raise InvariantError(f"signature {sig} at vertex {v} does not sum to "
                                 f"{order}(2g-2)")
        labels.append(VertexStratumLabel(v, g.genera[v], order, sig))
    return labels


@dataclass(frozen=True)
class EnumerationBounds:
    max_genus: int = 6
    max_legs: int = 6
    max_edges: int = 12


@dataclass
class Decomposition:
    g: int
    m: tuple
    k: int
    case: Case
    strata: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.m)

    def boundary(self) -> list:
        return [s for s in self.strata if not s.interior]


def interior_stratum(g: int, weighting: Weighting) -> DecoratedStratum:
    graph = StableGraph.from_edges([g], [], [0] * len(weighting.m))
    return DecoratedStratum(graph, weighting, Twist(weighting.m, weighting.k),
                            StarShape(0, ()))


def _outlying_shapes(budget: int, max_edges: int, floor=None):
    """Non-increasing lists of ``(genus, edges)`` with genus >= 1, edges >= 1.

    Each pair costs ``genus + edges - 1`` of the genus budget.
    """
    yield ()
    for gv in range(1, budget + 1):
        for ev in range(1, min(budget - gv + 1, max_edges) + 1):
            pair = (gv, ev)
            if floor is not None and pair > floor:
                continue
            for rest in _outlying_shapes(budget - gv - ev + 1, max_edges - ev, pair):
                yield (pair,) + rest


def _leg_placements(weighting: Weighting, shape: tuple):
    """Vertex of every leg: bad legs on the centre (0), good legs anywhere.

    An outlying vertex of genus ``g_v`` can absorb good legs with
    ``sum m/k <= 2 g_v - 2``; otherwise its edges cannot all carry ``I' >= 1``.
    """
    m, k = weighting.m, weighting.k
    good = [i for i in range(len(m)) if not weighting.is_bad(i + 1)]
    spare = [None] + [2 * gv - 2 for gv, _ in shape]
    placement = [0] * len(m)

    def rec(j):
        if j == len(good):
            yield tuple(placement)
            return
        i = good[j]
        w = m[i] // k
        for v in range(len(spare)):
            if v and spare[v] < w:
                continue
            placement[i] = v
            if v:
                spare[v] -= w
            yield from rec(j + 1)
            if v:
                spare[v] += w
        placement[i] = 0

    yield from rec(0)


def enumerate_strata(g: int, m: Sequence[int], k: int,
                     bounds: EnumerationBounds = EnumerationBounds(),
                     guard: SizeGuard = DEFAULT_GUARD) -> Decomposition:
    m = tuple(int(x) for x in m)
    n = len(m)
    if n < 1 or 2 * g - 2 + n <= 0:
        raise InputError(f"(g, n) = ({g}, {n}) is not in the stable range")
    case = classify_case(g, m, k)
    if case is not Case.GENERIC:
        raise InputError(f"input is in case {case.value}; only GENERIC is supported")
    if g > bounds.max_genus or n > bounds.max_legs:
        raise GuardOverflow(f"(g, n) = ({g}, {n}) exceeds enumeration bounds "
                            f"({bounds.max_genus}, {bounds.max_legs})", 0)
    weighting = Weighting(m, k)
    found = {}
    interior = interior_stratum(g, weighting)
    for shape in _outlying_shapes(g, bounds.max_edges):
        if not shape:
            continue
        r = len(shape)
        g0 = g - sum(gv + ev - 1 for gv, ev in shape)
        total_edges = sum(ev for _, ev in shape)
        if r + 1 > guard.max_vertices or total_edges > guard.max_edges:
            raise GuardOverflow(f"shape {shape} exceeds size guard", len(found))
        genera = [g0] + [gv for gv, _ in shape]
        edges = [(0, v + 1) for v, (_, ev) in enumerate(shape) for _ in range(ev)]
        for placement in _leg_placements(weighting, shape):
            if 2 * g0 - 2 + total_edges + placement.count(0) <= 0:
                continue
            graph = StableGraph.from_edges(genera, edges, placement)
            star = StarShape(0, tuple(range(1, r + 1)))
            for tw in enumerate_positive_twists(graph, weighting, star):
                s = DecoratedStratum(graph, weighting, tw, star)
                try:
                    key = s.key
                except GuardOverflow as exc:
                    raise GuardOverflow(str(exc), len(found)) from None
                found.setdefault(key, s)
    strata = sorted(found.values(),
                    key=lambda s: (s.graph.num_vertices, s.graph.num_edges, s.key))
    return Decomposition(g, m, k, case, [interior] + strata)


def find_stratum(decomposition: Decomposition, graph: StableGraph,
                 twist: Twist) -> Optional[DecoratedStratum]:
    key = canonical_form(graph, twist.values)
    for s in decomposition.strata:
        if s.key == key:
            return s
    return None


def make_stratum(graph: StableGraph, weighting: Weighting, twist: Twist) -> DecoratedStratum:
    """Wrap a user-supplied star and positive twist, validating both."""
    weighting.check(graph)
    star = is_simple_star(graph, weighting)
    if star is None:
        raise InputError("graph is not a simple star for this weighting")
    report = validate_twist(graph, weighting, twist)
    if not report.valid:
        raise InputError(f"invalid twist: {report}")
    for e in graph.edges:
        val = twist[outlying_half(graph, star, e)]
        if val <= 0 or val % weighting.k:
            raise InputError(f"edge {e[0]} has twist {val}, not a positive multiple of k")
    return DecoratedStratum(graph, weighting, twist, star)
