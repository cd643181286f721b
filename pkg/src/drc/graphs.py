"""Stable graphs: structure, homology, stars and decorated isomorphism.

Half-edges are dense integers ``0..#H-1``.  A half-edge ``h`` with
``involution[h] == h`` is a leg; otherwise ``h`` is also a *directed edge*
from ``ends[h]`` to ``ends[involution[h]]``.  An edge is named by the smaller
of its two half-edge ids.

A cycle is a tuple of directed half-edges, rotated so that its smallest
half-edge id comes first.  Both orientations of a cycle are kept as distinct
cycles.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import GuardOverflow, InputError

Cycle = tuple  # tuple[int, ...] of directed half-edges


@dataclass(frozen=True)
class SizeGuard:
    max_vertices: int = 12
    max_edges: int = 16
    max_labelings: int = 2_000_000
    max_cycles: int = 20_000

    def check(self, graph: "StableGraph") -> None:
        if graph.num_vertices > self.max_vertices:
            raise GuardOverflow(
                f"{graph.num_vertices} vertices exceeds guard {self.max_vertices}")
        if graph.num_edges > self.max_edges:
            raise GuardOverflow(f"{graph.num_edges} edges exceeds guard {self.max_edges}")


DEFAULT_GUARD = SizeGuard()


@dataclass(frozen=True)
class StableGraph:
    genera: tuple
    ends: tuple
    involution: tuple
    legs: tuple  # legs[i] is the half-edge carrying marking i + 1

    @classmethod
    def from_edges(cls, genera: Sequence[int], edges: Iterable[tuple[int, int]],
                   legs: Sequence[int]) -> "StableGraph":
        """Build a graph from vertex genera, ``(u, v)`` edges and leg vertices.

        Legs get half-edges ``0..n-1`` in marking order; edge ``j`` gets the
        pair ``(n + 2j, n + 2j + 1)`` with the first half at ``u``.
        """
        ends = list(legs)
        inv = list(range(len(legs)))
        for u, v in edges:
            h = len(ends)
            ends += [u, v]
            inv += [h + 1, h]
        return cls(tuple(genera), tuple(ends), tuple(inv), tuple(range(len(legs))))

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_half_edges(self) -> int:
        return len(self.ends)

    @property
    def n(self) -> int:
        return len(self.legs)

    @cached_property
    def edges(self) -> tuple:
        """Edges as ``(h, h')`` pairs with ``h < h'``, sorted."""
        return tuple((h, self.involution[h]) for h in range(len(self.ends))
                     if h < self.involution[h])

    @cached_property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def _incidence(self) -> tuple:
        halves = [[] for _ in self.genera]
        for h, v in enumerate(self.ends):
            halves[v].append(h)
        marks = [[] for _ in self.genera]
        for i, h in enumerate(self.legs):
            marks[self.ends[h]].append(i + 1)
        return (tuple(tuple(x) for x in halves),
                tuple(tuple(h for h in x if self.involution[h] != h) for x in halves),
                tuple(tuple(x) for x in marks))

    def edge_of(self, h: int) -> int:
        return min(h, self.involution[h])

    def is_leg(self, h: int) -> bool:
        return self.involution[h] == h

    def target(self, h: int) -> int:
        return self.ends[self.involution[h]]

    def half_edges_at(self, v: int) -> list:
        return list(self._incidence[0][v])

    def edge_halves_at(self, v: int) -> list:
        return list(self._incidence[1][v])

    def markings_at(self, v: int) -> list:
        return list(self._incidence[2][v])

    def valence(self, v: int) -> int:
        return len(self._incidence[1][v])

    def is_self_loop(self, h: int) -> bool:
        return not self.is_leg(h) and self.ends[h] == self.target(h)

    @property
    def genus(self) -> int:
        return betti1(self) + sum(self.genera)

    # JSON schema ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": v, "genus": g} for v, g in enumerate(self.genera)],
            "half_edges": [{"id": h, "vertex": v} for h, v in enumerate(self.ends)],
            "pairing": [[h, hp] for h, hp in self.edges],
            "legs": [{"half_edge": h, "marking": i + 1} for i, h in enumerate(self.legs)],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StableGraph":
        try:
            vids = sorted(v["id"] for v in doc["vertices"])
            vmap = {v: i for i, v in enumerate(vids)}
            genus_of = {v["id"]: int(v["genus"]) for v in doc["vertices"]}
            hids = sorted(h["id"] for h in doc["half_edges"])
            hmap = {h: i for i, h in enumerate(hids)}
            if len(vmap) != len(doc["vertices"]) or len(hmap) != len(doc["half_edges"]):
                raise InputError("duplicate vertex or half-edge id")
            ends = [0] * len(hids)
            for h in doc["half_edges"]:
                if h["vertex"] not in vmap:
                    raise InputError(f"half-edge {h['id']} attached to unknown vertex {h['vertex']}")
                ends[hmap[h["id"]]] = vmap[h["vertex"]]
            inv = list(range(len(hids)))
            seen = set()
            for a, b in doc.get("pairing", []):
                if a in seen or b in seen or a == b:
                    raise InputError(f"half-edge paired twice or with itself in [{a}, {b}]")
                seen.update((a, b))
                inv[hmap[a]], inv[hmap[b]] = hmap[b], hmap[a]
            legs_doc = sorted(doc.get("legs", []), key=lambda l: l["marking"])
            if [l["marking"] for l in legs_doc] != list(range(1, len(legs_doc) + 1)):
                raise InputError("leg markings must be 1..n")
            legs = tuple(hmap[l["half_edge"]] for l in legs_doc)
        except KeyError as exc:
            raise InputError(f"graph JSON missing field {exc}") from None
        graph = cls(tuple(genus_of[v] for v in vids), tuple(ends), tuple(inv), legs)
        unmarked = [h for h in range(len(ends)) if graph.is_leg(h) and h not in legs]
        if unmarked:
            raise InputError(f"half-edges {unmarked} are neither paired nor marked legs")
        return graph


@dataclass(frozen=True)
class Weighting:
    """Leg weights ``m`` (indexed by marking - 1) and the order ``k``."""

    m: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))

    def is_bad(self, marking: int) -> bool:
        """A leg that must sit on the central vertex of a star."""
        x = self.m[marking - 1]
        return x < 0 or x % self.k != 0

    def check(self, graph: StableGraph) -> None:
        if len(self.m) != graph.n:
            raise InputError(f"{len(self.m)} weights for {graph.n} legs")
        target = self.k * (2 * graph.genus - 2)
        if sum(self.m) != target:
            raise InputError(f"weights sum to {sum(self.m)}, expected k(2g-2) = {target}")


@dataclass
class ValidationReport:
    valid: bool
    errors: list = field(default_factory=list)
    connected: bool = False
    genus: Optional[int] = None
    b1: Optional[int] = None
    unstable_vertices: list = field(default_factory=list)


def validate(graph: StableGraph) -> ValidationReport:
    errors = []
    nv, nh = graph.num_vertices, graph.num_half_edges
    if len(graph.involution) != nh:
        errors.append("involution and ends have different lengths")
        return ValidationReport(False, errors)
    for v, g in enumerate(graph.genera):
        if g < 0:
            errors.append(f"vertex {v}: negative genus {g}")
    for h in range(nh):
        if not 0 <= graph.ends[h] < nv:
            errors.append(f"half-edge {h}: dangling, attached to missing vertex {graph.ends[h]}")
        hp = graph.involution[h]
        if not 0 <= hp < nh:
            errors.append(f"half-edge {h}: paired with missing half-edge {hp}")
        elif graph.involution[hp] != h:
            errors.append(f"half-edge {h}: pairing not involutive ({h}->{hp}->{graph.involution[hp]})")
    legset = set(graph.legs)
    for h in range(nh):
        if graph.involution[h] == h and h not in legset:
            errors.append(f"half-edge {h}: unpaired but not a marked leg")
    for h in graph.legs:
        if not (0 <= h < nh and graph.involution[h] == h):
            errors.append(f"leg half-edge {h} is paired or missing")
    if errors:
        return ValidationReport(False, errors)

    connected = is_connected(graph)
    if not connected:
        errors.append("graph is not connected")
    unstable = []
    for v in range(nv):
        if 2 * graph.genera[v] - 2 + len(graph.half_edges_at(v)) <= 0:
            unstable.append(v)
            errors.append(f"vertex {v}: unstable (2g-2+#half-edges <= 0)")
    b1 = betti1(graph)
    return ValidationReport(not errors, errors, connected, b1 + sum(graph.genera), b1, unstable)


def is_connected(graph: StableGraph) -> bool:
    if graph.num_vertices == 0:
        return False
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for h in graph.edge_halves_at(u):
            w = graph.target(h)
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == graph.num_vertices


def betti1(graph: StableGraph) -> int:
    return graph.num_edges - graph.num_vertices + 1


def canonical_degree(graph: StableGraph, v: int) -> int:
    return 2 * graph.genera[v] - 2 + graph.valence(v)


# Homology ------------------------------------------------------------------

def spanning_tree(graph: StableGraph) -> frozenset:
    """Greedy union-find over edges in edge-id order."""
    parent = list(range(graph.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for h, hp in graph.edges:
        a, b = find(graph.ends[h]), find(graph.ends[hp])
        if a != b:
            parent[a] = b
            tree.add(h)
    return frozenset(tree)


def canonical_rotation(cycle: Sequence[int]) -> Cycle:
    i = cycle.index(min(cycle))
    return tuple(cycle[i:]) + tuple(cycle[:i])


def reverse_cycle(graph: StableGraph, cycle: Cycle) -> Cycle:
    return canonical_rotation([graph.involution[h] for h in reversed(cycle)])


def cycle_edge_vector(graph: StableGraph, cycle: Cycle) -> dict:
    """Signed edge incidence: +1 when traversed from the edge's smaller half."""
    vec = {}
    for h in cycle:
        e = graph.edge_of(h)
        vec[e] = vec.get(e, 0) + (1 if h == e else -1)
    return {e: c for e, c in vec.items() if c}


def _tree_path(graph: StableGraph, tree: frozenset, start: int, goal: int) -> list:
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for h in graph.edge_halves_at(u):
            if graph.edge_of(h) in tree:
                w = graph.target(h)
                if w not in prev:
                    prev[w] = h
                    queue.append(w)
    path = []
    v = goal
    while prev[v] is not None:
        h = prev[v]
        path.append(h)
        v = graph.ends[h]
    return path[::-1]


def cycle_basis(graph: StableGraph, tree: Optional[frozenset] = None) -> list:
    """Fundamental cycles: each non-tree edge from its smaller half, then back
    through the tree."""
    if tree is None:
        tree = spanning_tree(graph)
    basis = []
    for h, hp in graph.edges:
        if h in tree:
            continue
        walk = [h] + _tree_path(graph, tree, graph.ends[hp], graph.ends[h])
        basis.append(canonical_rotation(walk))
    return basis


def basis_coefficients(graph: StableGraph, cycle: Cycle, tree: frozenset,
                       basis: Sequence[Cycle]) -> list:
    """Integer coordinates of ``cycle`` in a fundamental basis.

    A fundamental cycle meets exactly one non-tree edge, so the coordinate is
    read off that edge.
    """
    vec = cycle_edge_vector(graph, cycle)
    coeffs = []
    for b in basis:
        (e, sign), = [(e, s) for e, s in cycle_edge_vector(graph, b).items() if e not in tree]
        coeffs.append(vec.get(e, 0) * sign)
    return coeffs


def all_cycles(graph: StableGraph, cap: int = DEFAULT_GUARD.max_cycles) -> list:
    """Every directed cycle, each orientation once, sorted."""
    found = []
    out = [graph.edge_halves_at(v) for v in range(graph.num_vertices)]

    def extend(start, u, path, on_path, used):
        for h in out[u]:
            e = graph.edge_of(h)
            if e in used:
                continue
            t = graph.target(h)
            if t == start:
                found.append(canonical_rotation(path + [h]))
                if len(found) > cap:
                    raise GuardOverflow(f"more than {cap} cycles", len(found))
            elif t > start and t not in on_path:
                on_path.add(t)
                used.add(e)
                extend(start, t, path + [h], on_path, used)
                used.discard(e)
                on_path.discard(t)

    for s in range(graph.num_vertices):
        extend(s, s, [], {s}, set())
    return sorted(found)


# Stars ---------------------------------------------------------------------

@dataclass(frozen=True)
class StarShape:
    center: int
    outlying: tuple


def is_simple_star(graph: StableGraph, weighting: Weighting) -> Optional[StarShape]:
    """Central vertex and outlying vertices, or ``None``.

    When no leg is bad (negative or not divisible by k) the centre is not
    pinned by the legs; the lowest-numbered admissible vertex is returned.
    """
    bad_vertices = {graph.ends[graph.legs[i - 1]]
                    for i in range(1, graph.n + 1) if weighting.is_bad(i)}
    if len(bad_vertices) > 1:
        return None
    candidates = sorted(bad_vertices) if bad_vertices else range(graph.num_vertices)
    for c in candidates:
        if all((graph.ends[h] == c) != (graph.ends[hp] == c) for h, hp in graph.edges):
            return StarShape(c, tuple(v for v in range(graph.num_vertices) if v != c))
    return None


# Decorated isomorphism -----------------------------------------------------

def _decoration(twist, h):
    return 0 if twist is None else twist[h]


def _refined_colors(graph: StableGraph, twist) -> list:
    colors_sig = []
    for v in range(graph.num_vertices):
        halves = graph.edge_halves_at(v)
        colors_sig.append((graph.genera[v], tuple(graph.markings_at(v)),
                           tuple(sorted(_decoration(twist, h) for h in halves)),
                           sum(1 for h in halves if graph.is_self_loop(h))))
    colors = _relabel(colors_sig)
    if len(set(colors)) == len(colors):
        return colors
    while True:
        sig = []
        for v in range(graph.num_vertices):
            nbrs = sorted((colors[graph.target(h)], _decoration(twist, h),
                           _decoration(twist, graph.involution[h]))
                          for h in graph.edge_halves_at(v))
            sig.append((colors[v], tuple(nbrs)))
        new = _relabel(sig)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _relabel(signatures: list) -> list:
    order = {s: i for i, s in enumerate(sorted(set(signatures)))}
    return [order[s] for s in signatures]


def _edge_records(graph: StableGraph, twist, position: Sequence[int]) -> tuple:
    recs = []
    for h, hp in graph.edges:
        a = (position[graph.ends[h]], _decoration(twist, h))
        b = (position[graph.ends[hp]], _decoration(twist, hp))
        recs.append(min(a + b, b + a))
    return tuple(sorted(recs))


def _labelings(graph: StableGraph, twist, guard: SizeGuard):
    colors = _refined_colors(graph, twist)
    classes = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    ordered = [classes[c] for c in sorted(classes)]
    count = math.prod(math.factorial(len(cls)) for cls in ordered)
    if count > guard.max_labelings:
        raise GuardOverflow(f"{count} candidate labelings exceeds guard {guard.max_labelings}")
    for perms in itertools.product(*(itertools.permutations(cls) for cls in ordered)):
        order = [v for block in perms for v in block]
        position = [0] * len(order)
        for i, v in enumerate(order):
            position[v] = i
        yield order, position


def _search(graph: StableGraph, twist, guard: SizeGuard):
    guard.check(graph)
    best, hits = None, 0
    for order, position in _labelings(graph, twist, guard):
        key = (tuple((graph.genera[v], tuple(graph.markings_at(v))) for v in order),
               _edge_records(graph, twist, position))
        if best is None or key < best:
            best, hits = key, 1
        elif key == best:
            hits += 1
    return best, hits


def canonical_form(graph: StableGraph, twist: Optional[Sequence[int]] = None,
                   guard: SizeGuard = DEFAULT_GUARD) -> tuple:
    """Key equal for isomorphic decorated graphs (legs fixed, twists kept)."""
    return _search(graph, twist, guard)[0]


def canonical_form_and_automorphisms(graph: StableGraph,
                                     twist: Optional[Sequence[int]] = None,
                                     guard: SizeGuard = DEFAULT_GUARD) -> tuple:
    """``(canonical_form, automorphism_count)`` from a single search."""
    key, vertex_autos = _search(graph, twist, guard)
    return key, vertex_autos * _edge_kernel(key)


def key_hex(key: tuple) -> str:
    return hashlib.sha256(repr(key).encode()).hexdigest()


def automorphism_count(graph: StableGraph, twist: Optional[Sequence[int]] = None,
                       guard: SizeGuard = DEFAULT_GUARD) -> int:
    """Order of the group of half-edge automorphisms fixing legs pointwise.

    Equal to (vertex permutations realised by automorphisms) times (the
    automorphisms fixing every vertex): parallel edges with equal decoration
    permute freely, and an undecorated or zero-twist self-loop can be flipped.
    """
    return canonical_form_and_automorphisms(graph, twist, guard)[1]


def _edge_kernel(key: tuple) -> int:
    kernel = 1
    for rec, mult in Counter(key[1]).items():
        kernel *= math.factorial(mult)
        if rec[0] == rec[2] and rec[1] == rec[3]:
            kernel *= 2 ** mult
    return kernel
