"""Toric chart equations around a simple star.

Chart coordinates are ``a_g<i>`` for the i-th cycle of the graph (see
:func:`drc.graphs.all_cycles`) and ``a_e<j>`` for the j-th edge in edge-id
order.  A cycle meets an edge with exponent ``I_gamma(e)``: the twist at the
half of ``e`` where the cycle *arrives*.  So a cycle leaving the centre along
``e`` and returning along ``f`` has ``I_gamma(e) = I(e) > 0`` and
``I_gamma(f) = -I(f)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import InputError
from .graphs import (DEFAULT_GUARD, SizeGuard, StableGraph, all_cycles, basis_coefficients,
                     betti1, canonical_rotation, cycle_basis, cycle_edge_vector, reverse_cycle,
                     spanning_tree)
from .laurent import LaurentPolynomial, mono_mul, mono_pow, mono_str, monomial
from .twists import Twist


def i_gamma(graph: StableGraph, cycle, edge: int, twist: Twist) -> int:
    for h in cycle:
        if graph.edge_of(h) == edge:
            return twist[graph.involution[h]]
    return 0


def gvar(i: int) -> tuple:
    return ("g", i)


def evar(e: int) -> tuple:
    return ("e", e)


@dataclass(frozen=True)
class BinomialEquation:
    lhs: tuple
    rhs: tuple
    flow: tuple  # sorted (cycle index, coefficient) pairs

    @property
    def trivial(self) -> bool:
        return self.lhs == self.rhs

    def polynomial(self) -> LaurentPolynomial:
        return LaurentPolynomial({self.lhs: 1}) - LaurentPolynomial({self.rhs: 1})

    def __str__(self):
        return f"{mono_str(self.lhs)} = {mono_str(self.rhs)}"

    def to_json(self) -> dict:
        def enc(m):
            return {f"{kind}{idx}": e for (kind, idx), e in m}
        return {"lhs": enc(self.lhs), "rhs": enc(self.rhs),
                "flow": {f"g{i}": c for i, c in self.flow}, "text": str(self)}


def _rank(rows) -> int:
    mat = [[Fraction(x) for x in r] for r in rows if any(r)]
    rank, col = 0, 0
    ncols = len(mat[0]) if mat else 0
    while rank < len(mat) and col < ncols:
        piv = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if piv is None:
            col += 1
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col] / mat[rank][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
        col += 1
    return rank


class ToricChart:
    """Monoid generators and binomial equations for one graph and twist.

    With ``divided=True`` exponents use ``I' = I / k``.
    """

    def __init__(self, graph: StableGraph, twist: Twist, divided: bool = True,
                 guard: SizeGuard = DEFAULT_GUARD):
        guard.check(graph)
        self.graph = graph
        self.twist = twist
        self.divided = divided
        scale = twist.k if divided else 1
        if divided and any(twist[h] % scale for h, _ in graph.edges):
            raise InputError(f"edge twists not divisible by k = {twist.k}")
        self.scale = scale
        self.edges = [h for h, _ in graph.edges]
        self.edge_index = {h: j for j, h in enumerate(self.edges)}
        self.cycles = all_cycles(graph, guard.max_cycles)
        self.index = {c: i for i, c in enumerate(self.cycles)}
        self.inverse = [self.index[reverse_cycle(graph, c)] for c in self.cycles]
        self.exponents = [
            {e: i_gamma(graph, c, e, twist) // scale for e in self.edges
             if i_gamma(graph, c, e, twist)}
            for c in self.cycles]
        self.tree = spanning_tree(graph)
        self.basis_cycles = cycle_basis(graph, self.tree)
        self.basis = [self.index[c] for c in self.basis_cycles]
        self.basis_set = set(self.basis)

    # generators and single equations ------------------------------------

    def monoid_generators(self) -> list:
        gens = [{evar(j): 1} for j in range(len(self.edges))]
        gens += [{evar(self.edge_index[e]): x for e, x in exps.items()}
                 for exps in self.exponents]
        return gens

    def m_ef(self, flow: Mapping[int, int], edge: int) -> int:
        return sum(f * self.exponents[i].get(edge, 0) for i, f in flow.items())

    def psi(self, flow: Mapping[int, int]) -> BinomialEquation:
        flow = {i: f for i, f in flow.items() if f}
        lhs = {gvar(i): f for i, f in flow.items() if f > 0}
        rhs = {gvar(i): -f for i, f in flow.items() if f < 0}
        for e in self.edges:
            m = self.m_ef(flow, e)
            if m < 0:
                lhs[evar(self.edge_index[e])] = -m
            elif m > 0:
                rhs[evar(self.edge_index[e])] = m
        return BinomialEquation(monomial(lhs), monomial(rhs), tuple(sorted(flow.items())))

    def delta(self, i: int) -> dict:
        return {i: 1}

    def basis_flow(self, i: int) -> dict:
        """``f_gamma``: the cycle written in the fundamental basis."""
        coeffs = basis_coefficients(self.graph, self.cycles[i], self.tree, self.basis_cycles)
        return {b: c for b, c in zip(self.basis, coeffs) if c}

    def step2_flow(self, i: int) -> dict:
        flow = self.basis_flow(i)
        flow[i] = flow.get(i, 0) - 1
        return {j: c for j, c in flow.items() if c}

    # systems ---------------------------------------------------------------

    def essential_system(self, include_trivial: bool = False) -> list:
        """``Psi_{f_gamma - delta_gamma}`` for all cycles, then ``Psi_{delta}`` on the basis."""
        flows = [self.step2_flow(i) for i in range(len(self.cycles))]
        flows += [self.delta(b) for b in self.basis]
        eqs, seen = [], set()
        for flow in flows:
            # Psi_{-f} = -Psi_f: keep the sign whose first coefficient is positive
            if flow and flow[min(flow)] < 0:
                flow = {i: -c for i, c in flow.items()}
            q = self.psi(flow)
            if q.flow in seen or (q.trivial and not include_trivial):
                continue
            seen.add(q.flow)
            eqs.append(q)
        return eqs

    def audit_system(self, bound: int) -> list:
        """Every ``Psi_f`` with ``1 <= |f|_1 <= bound``, one of each pair ``+-f``."""
        eqs = []
        n = len(self.cycles)
        for norm in range(1, bound + 1):
            for support in itertools.combinations_with_replacement(range(n), norm):
                for signs in itertools.product((1, -1), repeat=norm):
                    flow = {}
                    for i, s in zip(support, signs):
                        flow[i] = flow.get(i, 0) + s
                    if sum(abs(c) for c in flow.values()) != norm:
                        continue
                    # Psi_{-f} is the same equation as Psi_f
                    if flow[min(flow)] < 0:
                        continue
                    eqs.append(self.psi(flow))
        seen, unique = set(), []
        for q in eqs:
            if q.flow not in seen:
                seen.add(q.flow)
                unique.append(q)
        return unique

    # Step 2 elimination --------------------------------------------------

    def step2_substitution(self) -> dict:
        """Each cycle variable as a Laurent monomial in the basis variables."""
        subs = {}
        for i in range(len(self.cycles)):
            subs[gvar(i)] = monomial({gvar(b): c for b, c in self.basis_flow(i).items()})
        return subs

    def independent_cycle_variables(self) -> int:
        """Free ``a_gamma`` left after imposing the cycle-only relations.

        Computed as ``#cycles - rank`` of the Step 2 relation vectors.
        """
        n = len(self.cycles)
        rows = []
        for i in range(n):
            flow = self.step2_flow(i)
            rows.append([flow.get(j, 0) for j in range(n)])
        return n - _rank(rows)

    def homology_rank(self) -> int:
        """Rank of the cycle/edge incidence matrix, an intrinsic ``b1``."""
        rows = []
        for c in self.cycles:
            vec = cycle_edge_vector(self.graph, c)
            rows.append([vec.get(e, 0) for e in self.edges])
        return _rank(rows)

    # lci witnesses ---------------------------------------------------------

    def _center(self) -> int:
        for h, hp in self.graph.edges:
            return self.graph.ends[h] if self.twist[h] < 0 else self.graph.ends[hp]
        return 0

    def _out_back(self, e_out: int, e_back: int, center: int) -> Optional[int]:
        """Index of the cycle leaving the centre along ``e_out`` and returning
        along ``e_back``."""
        if e_out == e_back:
            return None
        g = self.graph
        h_out = e_out if g.ends[e_out] == center else g.involution[e_out]
        h_back = e_back if g.ends[e_back] != center else g.involution[e_back]
        return self.index[canonical_rotation([h_out, h_back])]

    def lci_witnesses(self) -> list:
        """Residuals of the complete-intersection witness identities (all zero
        when the check passes)."""
        g = self.graph
        center = self._center()
        if any((g.ends[h] == center) == (g.ends[hp] == center) for h, hp in g.edges):
            raise InputError("lci witness check needs a simple star graph")
        subs = self.step2_substitution()
        residuals = []

        for i in range(len(self.cycles)):
            step2 = self.psi(self.step2_flow(i))
            # Step 1: the Step 2 relations involve no edge variable
            if any(kind == "e" for (kind, _), _ in step2.lhs + step2.rhs):
                residuals.append(("step1", i, step2.polynomial()))
            residuals.append(("step2", i, step2.polynomial().substitute(subs)))

        def on_z(c: Optional[int]) -> LaurentPolynomial:
            if c is None:
                return LaurentPolynomial()
            if c in self.basis_set:
                return self.psi(self.delta(c)).polynomial()
            j = self.inverse[c]
            assert j in self.basis_set
            return -LaurentPolynomial.mono({gvar(c): 1}) * self.psi(self.delta(j)).polynomial()

        for i, cyc in enumerate(self.cycles):
            if i in self.basis_set or self.inverse[i] in self.basis_set:
                continue
            h_out = next(h for h in cyc if g.ends[h] == center)
            h_in = next(h for h in cyc if g.ends[h] != center)
            e1, e2 = g.edge_of(h_out), g.edge_of(h_in)
            v = g.target(h_out)
            e0 = next(e for e in self.edges if e in self.tree and v in
                      (g.ends[e], g.ends[g.involution[e]]))
            c1, c2 = self._out_back(e1, e0, center), self._out_back(e2, e0, center)
            a_gamma = LaurentPolynomial.mono({gvar(i): 1})
            # gamma_1 returns along e0, so its exponent there is -I'(e0)
            a_e0 = LaurentPolynomial.mono({evar(self.edge_index[e0]): -self.exponents[c1][e0]})
            target = self.psi(self.delta(i)).polynomial()
            flow = {c1: 1, c2: -1, i: -1}
            psi_f = self.psi(flow)
            # literal identity in the polynomial ring
            literal = (self.psi(self.delta(c1)).polynomial()
                       - a_gamma * self.psi(self.delta(c2)).polynomial()
                       - a_e0 * psi_f.polynomial())
            residuals.append(("step3-literal", i, target - literal))
            residuals.append(("step3-flow", i, psi_f.polynomial().substitute(subs)))
            # membership in the ideal of the basis equations, on Z
            on_basis = on_z(c1) - a_gamma * on_z(c2)
            residuals.append(("step3-basis", i, (target - on_basis).substitute(subs)))
        return residuals

    def lci_witness_check(self) -> bool:
        return all(r.is_zero() for _, _, r in self.lci_witnesses())

    def sum_consequence_residual(self, f1: Mapping[int, int],
                                 f2: Mapping[int, int]) -> LaurentPolynomial:
        """``G * Psi_{f1+f2} - (L_{f2} Psi_{f1} + R_{f1} Psi_{f2})``.

        ``G = L_{f1} L_{f2} / L_{f1+f2}`` must be an honest monomial.
        """
        total = dict(f1)
        for i, c in f2.items():
            total[i] = total.get(i, 0) + c
        p1, p2, p = self.psi(f1), self.psi(f2), self.psi(total)
        gmono = mono_mul(mono_mul(p1.lhs, p2.lhs), mono_pow(p.lhs, -1))
        if any(e < 0 for _, e in gmono):
            raise AssertionError(f"cofactor {gmono} is not a monomial")
        lhs = LaurentPolynomial({gmono: 1}) * p.polynomial()
        rhs = (LaurentPolynomial({p2.lhs: 1}) * p1.polynomial()
               + LaurentPolynomial({p1.rhs: 1}) * p2.polynomial())
        return lhs - rhs


def monoid_generators(graph: StableGraph, twist: Twist, divided: bool = True) -> list:
    return ToricChart(graph, twist, divided).monoid_generators()


def chart_equation_system(graph: StableGraph, twist: Twist, bound: int = 3,
                          divided: bool = True) -> dict:
    chart = ToricChart(graph, twist, divided)
    return {"essential": chart.essential_system(), "audit": chart.audit_system(bound)}


def lci_witness_check(graph: StableGraph, twist: Twist) -> bool:
    return ToricChart(graph, twist, divided=True).lci_witness_check()


def chart_digest(graph: StableGraph, twist: Twist) -> dict:
    chart = ToricChart(graph, twist, divided=True)
    return {
        "cycles": len(chart.cycles),
        "b1": betti1(graph),
        "independent_cycle_variables": chart.independent_cycle_variables(),
        "essential_equations": [str(q) for q in chart.essential_system()],
        "lci": chart.lci_witness_check(),
    }
