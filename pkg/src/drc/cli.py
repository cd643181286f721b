"""``drc`` command-line interface.

Exit codes: 0 success, 2 input error, 3 size guard overflow, 4 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .archive import dumps, parse_archive, run_enumerate, stratum_record
from .charts import ToricChart
from .errors import DRCError, InputError
from .graphs import SizeGuard, StableGraph, Weighting, is_simple_star, validate
from .local import local_ring
from .residues import (INF, KDifferential0, k_residue, parse_point, residue,
                       root_sum_check, root_sum_experiment)
from .strata import EnumerationBounds, make_stratum
from .sweep import run_sweep
from .twists import Twist, parse_inline_edge_values, star_twist

log = logging.getLogger("drc")


def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _guard(args) -> SizeGuard:
    if args.guard_vertices < 1 or args.guard_edges < 1:
        raise InputError("size guards must be positive")
    return SizeGuard(max_vertices=args.guard_vertices, max_edges=args.guard_edges)


def _emit(args, payload: bytes, table: str = None) -> None:
    if getattr(args, "table", False) and table is not None:
        payload = (table + "\n").encode()
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())


def _load_graph(path: str) -> tuple:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read graph {path}: {exc}") from None
    graph = StableGraph.from_json(doc)
    report = validate(graph)
    if not report.valid:
        raise InputError("invalid graph: " + "; ".join(report.errors))
    return graph, doc


def _weighting(args, doc: dict, graph: StableGraph):
    m = _int_list(args.m) if args.m else doc.get("m")
    k = args.k if args.k is not None else doc.get("k")
    if k is None:
        raise InputError("k is required (--k or a \"k\" field in the graph file)")
    if m is None:
        return None, k
    if args.n is not None and args.n != len(m):
        raise InputError(f"--n {args.n} does not match {len(m)} weights")
    w = Weighting(tuple(m), k)
    w.check(graph)
    return w, k


def _load_twist(spec: str, graph: StableGraph, weighting, k: int) -> Twist:
    path = Path(spec)
    if path.exists():
        doc = json.loads(path.read_text())
        return Twist.from_json(doc.get("twist", doc), k)
    values = parse_inline_edge_values(spec, graph.num_edges)
    if weighting is not None:
        star = is_simple_star(graph, weighting)
        if star is not None:
            return star_twist(graph, star, weighting, values)
    # no star known: the value sits on the larger half-edge of each edge
    tw = [0] * graph.num_half_edges
    for (h, hp), v in zip(graph.edges, values):
        tw[h], tw[hp] = -v, v
    if weighting is not None:
        for i, h in enumerate(graph.legs):
            tw[h] = weighting.m[i]
    return Twist(tuple(tw), k)


# subcommands -------------------------------------------------------------

def cmd_enumerate(args) -> int:
    m = _int_list(args.m)
    if args.n is not None and args.n != len(m):
        raise InputError(f"--n {args.n} does not match {len(m)} weights")
    archive = run_enumerate(args.g, m, args.k, EnumerationBounds(), guard=_guard(args))
    rows = [f"{'#':>3} {'V':>2} {'E':>2} {'Aut':>3} {'weight':>8} {'fp':>8}  twists / vertex strata"]
    for i, s in enumerate(archive.strata):
        vals = ",".join(str(v) for v in s["edge_values"].values()) or "-"
        labels = " ".join(lab["label"] for lab in s["vertex_labels"])
        rows.append(f"{i:>3} {len(s['graph']['vertices']):>2} {len(s['graph']['pairing']):>2} "
                    f"{s['aut_order']:>3} {s['weight']:>8} {s['fp_coefficient']:>8}  "
                    f"[{vals}] {labels}" + ("  (interior)" if s["interior"] else ""))
    rows.append(f"{len(archive.strata)} terms, case {archive.doc['case']}")
    _emit(args, archive.serialize(), "\n".join(rows))
    return 0


def cmd_stratum_report(args) -> int:
    graph, doc = _load_graph(args.graph)
    weighting, k = _weighting(args, doc, graph)
    if weighting is None:
        raise InputError("leg weights are required (--m or an \"m\" field in the graph file)")
    if args.g is not None and args.g != graph.genus:
        raise InputError(f"--g {args.g} but the graph has genus {graph.genus}")
    _guard(args).check(graph)
    s = make_stratum(graph, weighting, _load_twist(args.twist, graph, weighting, k))
    rec = stratum_record(s)
    ring = local_ring(s)
    loc = rec["drl_local"]
    table = "\n".join([
        f"edges I(e): {list(s.edge_values)}   I'(e): {list(s.divided_values)}",
        f"weight {s.weight}   fp coefficient {s.fp_coefficient}   |Aut| {s.aut_order}",
        "vertex strata: " + " ".join(str(lab) for lab in s.vertex_labels),
        f"fibre count {loc['fibre_count']}   local ring {ring.describe()}   length {loc['length']}",
        f"multiplicity {loc['multiplicity']}   tangent {loc['tangent']}",
    ])
    _emit(args, dumps(rec), table)
    return 0


def cmd_chart_equations(args) -> int:
    graph, doc = _load_graph(args.graph)
    weighting, k = _weighting(args, doc, graph)
    _guard(args).check(graph)
    twist = _load_twist(args.twist, graph, weighting, k)
    chart = ToricChart(graph, twist, divided=args.divided, guard=_guard(args))
    essential = chart.essential_system()
    audit = chart.audit_system(args.bound)
    out = {
        "cycles": [list(c) for c in chart.cycles],
        "basis": chart.basis,
        "essential": [q.to_json() for q in essential],
        "audit": [q.to_json() for q in audit],
        "independent_cycle_variables": chart.independent_cycle_variables(),
    }
    try:
        out["lci_witness"] = chart.lci_witness_check()
    except InputError as exc:
        out["lci_witness"] = None
        log.info("lci witness skipped: %s", exc)
    lines = [str(q) for q in essential]
    if args.bound:
        lines.append(f"-- audit family |f|_1 <= {args.bound}:")
        lines += [str(q) for q in audit]
    _emit(args, dumps(out), "\n".join(lines))
    return 0


def _parse_factors(text: str) -> tuple:
    facs = []
    for part in text.split(","):
        if not part.strip():
            continue
        try:
            loc, mult = part.rsplit(":", 1)
            facs.append((Fraction(loc.strip()), int(mult)))
        except ValueError:
            raise InputError(f"bad factor {part!r}; expected location:multiplicity") from None
    return tuple(facs)


def cmd_residue(args) -> int:
    diff = KDifferential0(args.k, Fraction(args.scalar), _parse_factors(args.factors))
    points = [parse_point(args.at)] if args.at else [
        p for p in diff.points if diff.order_at(p) < 0]
    results = []
    for p in points:
        entry = {"point": str(p), "order": diff.order_at(p)}
        if args.k_residue or diff.k > 1:
            entry["k_residue"] = k_residue(diff, p).to_json()
        else:
            entry["residue"] = residue(diff, p)
        results.append(entry)
    payload = {"k": diff.k, "m_inf": diff.m_inf, "results": results}
    if diff.k == 1 and not args.at:
        payload["residue_sum"] = sum((residue(diff, p) for p in diff.points), Fraction(0))
    table = "\n".join(f"{r['point']:>8}  ord {r['order']:>4}  "
                      + (f"Res^{diff.k} {r['k_residue']['value']}" if "k_residue" in r
                         else f"Res {r['residue']}") for r in results)
    _emit(args, dumps(payload), table)
    return 0


def cmd_root_sum(args) -> int:
    subset = _int_list(args.subset)
    if args.factors:
        diff = KDifferential0(args.k, Fraction(args.scalar), _parse_factors(args.factors))
        report = root_sum_check(diff, [diff.point_at(i) for i in subset])
        _emit(args, dumps(report.to_json()),
              f"k-residues {[str(v) for v in report.residues]}; "
              f"{'nonzero for all root choices' if report.nonvanishing else 'VANISHES or undetermined'}")
        return 0 if report.nonvanishing or not report.proper else 4
    exp = root_sum_experiment(args.k, _int_list(args.stratum), subset, args.trials, args.seed)
    _emit(args, dumps(exp.to_json()),
          f"{exp.nonzero}/{exp.trials} nonzero, {exp.zero} zero, {exp.undetermined} undetermined")
    return 4 if exp.zero else 0


def cmd_sweep(args) -> int:
    ks = _int_list(args.ks) if args.ks else list(range(1, args.k + 1))
    report = run_sweep(args.g, args.n, ks, args.m_bound, ordered=not args.sorted_only,
                       inject_fault=args.inject_fault, guard=_guard(args))
    _emit(args, dumps(report.to_json()), report.table())
    return 0 if report.ok else 4


def cmd_verify_archive(args) -> int:
    data = Path(args.archive).read_bytes()
    archive = parse_archive(data)
    same = archive.serialize() == data
    msg = f"ok: {len(archive.strata)} strata re-verified" + ("" if same else " (not in canonical form)")
    _emit(args, dumps({"ok": True, "strata": len(archive.strata), "canonical": same}), msg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="drc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"drc {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, json_default=True):
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="table", action="store_false", default=not json_default)
        fmt.add_argument("--table", dest="table", action="store_true")
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--guard-vertices", type=int, default=SizeGuard.max_vertices)
        sp.add_argument("--guard-edges", type=int, default=SizeGuard.max_edges)
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("enumerate", help="all boundary strata for (g, m, k)")
    sp.add_argument("--g", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", required=True, help="comma list, e.g. --m=-2,5,3,12")
    common(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("stratum-report", help="invariants of one star graph with a twist")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--twist", required=True, help='"[e0:3,e1:6,e2:3]" or a JSON file')
    sp.add_argument("--g", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--m")
    common(sp)
    sp.set_defaults(func=cmd_stratum_report)

    sp = sub.add_parser("chart-equations", help="binomial chart equations Psi_f")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--twist", required=True)
    sp.add_argument("--divided", action="store_true")
    sp.add_argument("--bound", type=int, default=0, help="also list Psi_f with |f|_1 <= bound")
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m")
    common(sp, json_default=False)
    sp.set_defaults(func=cmd_chart_equations)

    sp = sub.add_parser("residue", help="residues and k-residues on the projective line")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--factors", required=True, help='"0:-2,1:-1" for z^-2 (z-1)^-1')
    sp.add_argument("--scalar", default="1")
    sp.add_argument("--at", help="a location or inf (default: every pole)")
    sp.add_argument("--k-residue", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_residue)

    sp = sub.add_parser("root-sum", help="non-vanishing of sums of k-th roots of k-residues")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--stratum", help="signature m1,...,mn summing to -2k")
    sp.add_argument("--factors", help="check one differential instead of random ones")
    sp.add_argument("--scalar", default="1")
    sp.add_argument("--subset", required=True, help="1-based marking indices")
    sp.add_argument("--trials", type=int, default=200)
    common(sp)
    sp.set_defaults(func=cmd_root_sum)

    sp = sub.add_parser("sweep", help="run every identity over a range of inputs")
    sp.add_argument("--g", type=int, default=3, help="max genus")
    sp.add_argument("--n", type=int, default=3, help="max number of markings")
    sp.add_argument("--k", type=int, default=2, help="max k")
    sp.add_argument("--ks", help="explicit comma list of k values")
    sp.add_argument("--m-bound", type=int, default=4, help="bound on |m_i|")
    sp.add_argument("--sorted-only", action="store_true",
                    help="only non-increasing weight vectors")
    sp.add_argument("--inject-fault", action="store_true",
                    help="corrupt one twist to exercise violation reporting")
    common(sp, json_default=False)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify-archive", help="re-verify a saved archive")
    sp.add_argument("archive")
    common(sp, json_default=False)
    sp.set_defaults(func=cmd_verify_archive)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "root-sum" and not (args.stratum or args.factors):
        parser.error("root-sum needs --stratum or --factors")
    try:
        return args.func(args)
    except DRCError as exc:
        print(f"drc: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"drc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
