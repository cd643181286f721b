"""Independent brute-force oracles used by the tests.

Nothing here calls into the enumeration, canonical-form or series code of
``drc``; only the plain data classes are shared.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import networkx as nx
import sympy
from networkx.algorithms.isomorphism import DiGraphMatcher

from drc.graphs import StableGraph


# isomorphism ---------------------------------------------------------------

def decorated_digraph(graph: StableGraph, twist=None) -> nx.DiGraph:
    """Vertex -> half-edge -> edge subdivision carrying all decorations."""
    G = nx.DiGraph()
    marking = {h: i + 1 for i, h in enumerate(graph.legs)}
    for v, gv in enumerate(graph.genera):
        G.add_node(("v", v), label=("vertex", gv))
    for h, v in enumerate(graph.ends):
        dec = None if twist is None else twist[h]
        G.add_node(("h", h), label=("half", marking.get(h), dec))
        G.add_edge(("v", v), ("h", h))
        hp = graph.involution[h]
        if hp != h:
            e = min(h, hp)
            G.add_node(("e", e), label=("edge",))
            G.add_edge(("h", h), ("e", e))
    return G


def _match(a, b):
    return a["label"] == b["label"]


def nx_isomorphic(g1, t1, g2, t2) -> bool:
    return nx.is_isomorphic(decorated_digraph(g1, t1), decorated_digraph(g2, t2),
                            node_match=_match)


def nx_automorphisms(graph: StableGraph, twist=None) -> int:
    G = decorated_digraph(graph, twist)
    return sum(1 for _ in DiGraphMatcher(G, G, node_match=_match).isomorphisms_iter())


def relabel(graph: StableGraph, twist, vperm, hperm):
    """Apply vertex permutation ``vperm`` and half-edge permutation ``hperm``."""
    nh = graph.num_half_edges
    ends = [0] * nh
    inv = [0] * nh
    for h in range(nh):
        ends[hperm[h]] = vperm[graph.ends[h]]
        inv[hperm[h]] = hperm[graph.involution[h]]
    genera = [0] * graph.num_vertices
    for v, gv in enumerate(graph.genera):
        genera[vperm[v]] = gv
    legs = tuple(hperm[h] for h in graph.legs)
    new = StableGraph(tuple(genera), tuple(ends), tuple(inv), legs)
    new_twist = None
    if twist is not None:
        vals = [0] * nh
        for h in range(nh):
            vals[hperm[h]] = twist[h]
        new_twist = tuple(vals)
    return new, new_twist


# stable graphs and simple stars --------------------------------------------

def _connected(nv, edges):
    adj = {v: set() for v in range(nv)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w in adj[u] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == nv


def stable_graphs(g: int, n: int):
    """All connected stable graphs of genus ``g`` with ``n`` legs (with repeats)."""
    max_v = max(1, 2 * g - 2 + n)
    pairs_all = lambda nv: [(u, v) for u in range(nv) for v in range(u, nv)]
    for nv in range(1, max_v + 1):
        for ne in range(nv - 1, g + nv):
            b1 = ne - nv + 1
            for edges in itertools.combinations_with_replacement(pairs_all(nv), ne):
                if not _connected(nv, edges):
                    continue
                for genera in itertools.product(range(g - b1 + 1), repeat=nv):
                    if sum(genera) + b1 != g:
                        continue
                    for legs in itertools.product(range(nv), repeat=n):
                        val = [0] * nv
                        for u, v in edges:
                            val[u] += 1
                            val[v] += 1
                        for v in legs:
                            val[v] += 1
                        if all(2 * genera[v] - 2 + val[v] > 0 for v in range(nv)):
                            yield StableGraph.from_edges(genera, edges, legs)


def star_center(graph: StableGraph, m, k):
    bad = {graph.ends[graph.legs[i]] for i in range(len(m)) if m[i] < 0 or m[i] % k}
    cands = bad if bad else set(range(graph.num_vertices))
    for c in sorted(cands):
        if len(bad - {c}):
            continue
        ok = True
        for h in range(graph.num_half_edges):
            hp = graph.involution[h]
            if hp != h and (graph.ends[h] == c) == (graph.ends[hp] == c):
                ok = False
        if ok:
            return c
    return None


def positive_twists_bruteforce(graph: StableGraph, m, k, center):
    """Every positive twist, by trying all edge values ``k * 1..k * cap``."""
    edges = [(h, graph.involution[h]) for h in range(graph.num_half_edges)
             if h < graph.involution[h]]
    cap = 2 * sum(graph.genera) + graph.num_half_edges + 2
    out = []
    for vals in itertools.product(range(1, cap + 1), repeat=len(edges)):
        tw = [0] * graph.num_half_edges
        for i, h in enumerate(graph.legs):
            tw[h] = m[i]
        for (h, hp), a in zip(edges, vals):
            outer = hp if graph.ends[h] == center else h
            tw[outer] = k * a
            tw[graph.involution[outer]] = -k * a
        ok = True
        for v in range(graph.num_vertices):
            halves = [h for h in range(graph.num_half_edges) if graph.ends[h] == v]
            nonleg = [h for h in halves if graph.involution[h] != h]
            can = 2 * graph.genera[v] - 2 + len(nonleg)
            if sum(tw[h] for h in halves) != k * can:
                ok = False
                break
        if ok:
            out.append(tuple(tw))
    return out


def strata_bruteforce(g: int, m, k) -> list:
    """Isomorphism classes of (simple star, positive twist), interior included."""
    classes = []
    for graph in stable_graphs(g, len(m)):
        c = star_center(graph, m, k)
        if c is None:
            continue
        for tw in positive_twists_bruteforce(graph, m, k, c):
            if not any(nx_isomorphic(graph, tw, g2, t2) for g2, t2 in classes):
                classes.append((graph, tw))
    return classes


# cycles ----------------------------------------------------------------------

def star_cycles_bruteforce(graph: StableGraph) -> set:
    """Directed 2-edge cycles of a loop-free graph as ``(out_half, back_half)``:
    leave ``u`` along one edge, come back along a parallel one."""
    out = set()
    edges = [(h, graph.involution[h]) for h in range(graph.num_half_edges)
             if h < graph.involution[h]]
    for (a, ap), (b, bp) in itertools.permutations(edges, 2):
        ends_a = {graph.ends[a], graph.ends[ap]}
        if ends_a != {graph.ends[b], graph.ends[bp]} or len(ends_a) != 2:
            continue
        for u in ends_a:
            out_half = a if graph.ends[a] == u else ap
            back_half = b if graph.ends[b] != u else bp
            out.add((out_half, back_half))
    return out


# local ring length -----------------------------------------------------------

def monomials_outside(exponents) -> int:
    count = 0
    for tup in itertools.product(*(range(x + 1) for x in exponents)):
        if all(a < x for a, x in zip(tup, exponents)):
            count += 1
    return count


# series ----------------------------------------------------------------------

def sympy_k_residue(k: int, scalar, factors, point) -> Fraction:
    """k-residue via sympy series of the k-th root, with a positive root branch."""
    t = sympy.Symbol("t")
    point = sympy.Rational(point)
    order = dict((sympy.Rational(b), mult) for b, mult in factors).get(point, 0)
    lead = sympy.Rational(scalar)
    for b, mult in factors:
        b = sympy.Rational(b)
        if b != point:
            lead *= (point - b) ** mult
    root_series = 1
    for b, mult in factors:
        b = sympy.Rational(b)
        if b != point:
            root_series *= (1 + t / (point - b)) ** sympy.Rational(mult, k)
    n = -1 - order // k
    coef = sympy.series(root_series, t, 0, n + 1).removeO().coeff(t, n) if n > 0 else (
        sympy.Integer(1) if n == 0 else sympy.Integer(0))
    val = lead * coef ** k
    val = sympy.nsimplify(val)
    return Fraction(int(val.p), int(val.q))


def sympy_residue(scalar, factors, point) -> Fraction:
    z = sympy.Symbol("z")
    expr = sympy.Rational(scalar)
    for b, mult in factors:
        expr *= (z - sympy.Rational(b)) ** mult
    r = sympy.residue(expr, z, sympy.Rational(point))
    r = sympy.nsimplify(r)
    return Fraction(int(r.p), int(r.q))
