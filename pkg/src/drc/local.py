"""Local invariants of the double ramification locus at a boundary stratum."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import GuardOverflow, InvariantError
from .graphs import betti1
from .strata import DecoratedStratum

MONOMIAL_ORACLE_LIMIT = 10 ** 4
LENGTH_LIMIT = 10 ** 12


def fibre_count(s: DecoratedStratum) -> int:
    """``k^b1``; on a star ``b1 = #E - #V_out``."""
    b1 = betti1(s.graph)
    assert b1 == s.graph.num_edges - len(s.star.outlying)
    return s.k ** b1


@dataclass(frozen=True)
class LocalRingPresentation:
    """``k[[l_e]] / (l_e^{I'(e)})``, one variable per edge."""

    exponents: tuple  # I'(e) in edge-id order

    def __post_init__(self):
        if any(x < 1 for x in self.exponents):
            raise InvariantError(f"local ring exponents must be >= 1: {self.exponents}")

    @property
    def reduced(self) -> bool:
        return all(x == 1 for x in self.exponents)

    def describe(self) -> str:
        if not self.exponents:
            return "k"
        names = [f"l_e{j}" for j in range(len(self.exponents))]
        gens = ", ".join(f"{v}^{x}" if x != 1 else v for v, x in zip(names, self.exponents))
        return f"k[[{', '.join(names)}]] / ({gens})"

    def to_json(self) -> dict:
        return {"exponents": {f"e{j}": x for j, x in enumerate(self.exponents)}}


def local_ring(s: DecoratedStratum) -> LocalRingPresentation:
    return LocalRingPresentation(s.divided_values)


def standard_monomial_count(exponents) -> int:
    """Brute-force count of monomials not in ``(l_e^{x_e})``."""
    return sum(1 for _ in itertools.product(*(range(x) for x in exponents)))


def local_ring_length(p: LocalRingPresentation) -> int:
    length = math.prod(p.exponents)
    if length > LENGTH_LIMIT:
        raise GuardOverflow(f"local ring length {length} exceeds {LENGTH_LIMIT}")
    if length <= MONOMIAL_ORACLE_LIMIT:
        count = standard_monomial_count(p.exponents)
        if count != length:
            raise InvariantError(f"length {length} != standard monomial count {count}")
    return length


def drc_multiplicity(s: DecoratedStratum) -> Fraction:
    """Fibre count times local length, which must equal the stratum weight."""
    mult = Fraction(fibre_count(s) * local_ring_length(local_ring(s)))
    weight = s.weight
    if mult != weight:
        raise InvariantError(f"multiplicity {mult} != weight {weight} at stratum {s.key_hex[:12]}")
    if mult * s.k ** (s.graph.num_vertices - 1) != math.prod(s.edge_values):
        raise InvariantError(f"fibre * length * k^(#V-1) != prod I at {s.key_hex[:12]}")
    return mult


@dataclass(frozen=True)
class TangentReport:
    dim_drl: int
    n_thick_edges: int
    dim_tangent: int
    coker_dim: int
    v1_set: tuple
    vgt1_set: tuple

    def to_json(self) -> dict:
        return {"dim_drl": self.dim_drl, "n_thick_edges": self.n_thick_edges,
                "dim_tangent": self.dim_tangent, "coker_dim": self.coker_dim,
                "v1": list(self.v1_set), "vgt1": list(self.vgt1_set)}


def _classify_outlying(s: DecoratedStratum):
    g = s.graph
    divided = dict(zip((h for h, _ in g.edges), s.divided_values))
    v1, vgt1 = [], []
    for v in s.star.outlying:
        vals = [divided[g.edge_of(h)] for h in g.edge_halves_at(v)]
        (vgt1 if all(x > 1 for x in vals) else v1).append(v)
    return tuple(v1), tuple(vgt1)


def tangent_identity_sides(s: DecoratedStratum) -> tuple:
    """Both sides of the dimension bookkeeping identity (must agree)."""
    g, n = s.graph.genus, s.graph.n
    ne, nv = s.graph.num_edges, s.graph.num_vertices
    thick = sum(1 for x in s.divided_values if x > 1)
    v1, vgt1 = _classify_outlying(s)
    lhs = (3 * g - 3 + n - ne) + (1 - nv + ne) + thick + len(v1) + len(vgt1) - g
    rhs = (2 * g - 3 + n) + thick
    return lhs, rhs


def tangent_report(s: DecoratedStratum) -> TangentReport:
    g, n = s.graph.genus, s.graph.n
    thick = sum(1 for x in s.divided_values if x > 1)
    v1, vgt1 = _classify_outlying(s)
    if set(v1) | set(vgt1) != set(s.star.outlying) or set(v1) & set(vgt1):
        raise InvariantError("V^1 and V^{>1} do not partition the outlying vertices")
    lhs, rhs = tangent_identity_sides(s)
    if lhs != rhs:
        raise InvariantError(f"tangent bookkeeping {lhs} != {rhs} at {s.key_hex[:12]}")
    dim = 2 * g - 3 + n
    return TangentReport(dim, thick, dim + thick, len(vgt1), v1, vgt1)


def tangent_kernel_basis_labels(s: DecoratedStratum) -> list:
    """Outlying vertices all of whose edges have ``I' > 1``; one kernel element each."""
    return list(_classify_outlying(s)[1])


def local_report(s: DecoratedStratum) -> dict:
    ring = local_ring(s)
    return {
        "fibre_count": fibre_count(s),
        "local_ring": ring.to_json(),
        "length": local_ring_length(ring),
        "multiplicity": drc_multiplicity(s),
        "tangent": tangent_report(s).to_json(),
    }
