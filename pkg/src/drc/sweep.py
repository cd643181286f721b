"""Property sweeps: run every per-stratum identity over ranges of inputs."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional

from .errors import DRCError, InputError
from .graphs import DEFAULT_GUARD, SizeGuard, betti1, is_simple_star
from .local import drc_multiplicity, fibre_count, local_ring, local_ring_length, tangent_report
from .strata import Case, DecoratedStratum, EnumerationBounds, classify_case, enumerate_strata
from .twists import Twist, fp_sign_vanishing_check, validate_twist


def weight_vectors(g: int, n: int, k: int, bound: int, ordered: bool = True):
    """All ``m`` with ``|m_i| <= bound`` summing to ``k(2g-2)``; GENERIC only.

    With ``ordered=False`` only non-increasing vectors are produced.
    """
    target = k * (2 * g - 2)
    for m in itertools.product(range(bound, -bound - 1, -1), repeat=n):
        if sum(m) != target:
            continue
        if not ordered and any(a < b for a, b in zip(m, m[1:])):
            continue
        if classify_case(g, m, k) is Case.GENERIC:
            yield m


def stratum_violations(s: DecoratedStratum) -> list:
    """Names of failed identities (empty when all hold)."""
    bad = []
    g = s.graph
    if g.genus != betti1(g) + sum(g.genera):
        bad.append("genus")
    if not s.interior:
        if is_simple_star(g, s.weighting) is None:
            bad.append("simple_star")
        if any(v <= 0 or v % s.k for v in s.edge_values):
            bad.append("positive_twist")
    if not validate_twist(g, s.weighting, s.twist).valid:
        bad.append("twist")
    if not fp_sign_vanishing_check(g, s.twist):
        bad.append("fp_sign")
    prod_i = math.prod(s.edge_values)
    try:
        w = s.weight
        if w * s.k ** (g.num_vertices - 1) != prod_i:
            bad.append("weight")
        if s.fp_coefficient * s.aut_order * s.k ** len(s.star.outlying) != prod_i:
            bad.append("fp_coefficient")
        if drc_multiplicity(s) != w:
            bad.append("multiplicity")
        if fibre_count(s) * local_ring_length(local_ring(s)) * s.k ** (g.num_vertices - 1) != prod_i:
            bad.append("fibre_length")
        rep = tangent_report(s)  # raises if the bookkeeping identity fails
        if rep.coker_dim != len(rep.vgt1_set):
            bad.append("tangent")
        labels = s.vertex_labels
        for lab in labels[1:]:
            if any(x < 0 for x in lab.signature):
                bad.append("outlying_label_sign")
    except DRCError as exc:
        bad.append(f"invariant: {exc}")
    return bad


def _corrupt(s: DecoratedStratum) -> DecoratedStratum:
    """Fault injection: bump the outlying half of the first edge by one."""
    vals = list(s.twist.values)
    h, hp = s.graph.edges[0]
    out = hp if s.graph.ends[h] == s.star.center else h
    vals[out] += 1
    vals[s.graph.involution[out]] -= 1
    return replace(s, twist=Twist(tuple(vals), s.k))


@dataclass
class SweepRow:
    inputs: int = 0
    strata: int = 0
    violations: int = 0


@dataclass
class SweepReport:
    rows: dict = field(default_factory=dict)        # (g, n, k) -> SweepRow
    violations: list = field(default_factory=list)  # (g, m, k, key_hex, [names])
    overflows: list = field(default_factory=list)   # (g, m, k, message)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def total_strata(self) -> int:
        return sum(r.strata for r in self.rows.values())

    def table(self) -> str:
        lines = [f"{'g':>3} {'n':>3} {'k':>3} {'inputs':>8} {'strata':>8} {'violations':>10}"]
        for (g, n, k), r in sorted(self.rows.items()):
            lines.append(f"{g:>3} {n:>3} {k:>3} {r.inputs:>8} {r.strata:>8} {r.violations:>10}")
        lines.append(f"total strata {self.total_strata}, violations {len(self.violations)}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "rows": [{"g": g, "n": n, "k": k, "inputs": r.inputs, "strata": r.strata,
                      "violations": r.violations} for (g, n, k), r in sorted(self.rows.items())],
            "violations": [{"g": g, "m": list(m), "k": k, "key": key, "failed": names}
                           for g, m, k, key, names in self.violations],
            "overflows": [{"g": g, "m": list(m), "k": k, "message": msg}
                          for g, m, k, msg in self.overflows],
        }


def run_sweep(g_max: int, n_max: int, ks: Iterable[int], m_bound: int,
              g_min: int = 0, n_min: int = 1, ordered: bool = True, inject_fault: bool = False,
              bounds: EnumerationBounds = EnumerationBounds(),
              guard: SizeGuard = DEFAULT_GUARD) -> SweepReport:
    report = SweepReport()
    ks = list(ks)
    for g in range(g_min, g_max + 1):
        for n in range(max(n_min, 1), n_max + 1):
            if 2 * g - 2 + n <= 0:
                continue
            for k in ks:
                row = report.rows.setdefault((g, n, k), SweepRow())
                for m in weight_vectors(g, n, k, m_bound, ordered):
                    row.inputs += 1
                    try:
                        decomp = enumerate_strata(g, m, k, bounds, guard)
                    except DRCError as exc:
                        if isinstance(exc, InputError):
                            raise
                        report.overflows.append((g, m, k, str(exc)))
                        continue
                    keys = set()
                    for s in decomp.strata:
                        row.strata += 1
                        if inject_fault and not s.interior and not report.violations:
                            s = _corrupt(s)
                        names = stratum_violations(s)
                        if s.key in keys:
                            names.append("duplicate_key")
                        keys.add(s.key)
                        if names:
                            row.violations += 1
                            report.violations.append((g, m, k, s.key_hex, names))
    return report
