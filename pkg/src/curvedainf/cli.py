"""Command-line front end.

Exit status: 0 success, 1 unreadable input, 2 invariant violation,
3 solver obstruction, 4 failed property check.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Sequence

from . import __version__
from .ainfty import assemble_triangle, check_bimodule, check_curved_ainfty
from .errors import EXIT_CODES, ObstructionError, ParseError, PropertyCheckError
from .moduli import (bound_slack, dim_gamma, dim_upper_bound, enumerate_dm_strata, enumerate_types,
                     sphere_exclusion, top_dimension)
from .properties import (check_cone_acyclicity, check_novikov, check_ring_laws, check_snf,
                         standard_cones)
from .ring import PowerSeries, Specialization
from .serialization import (algebra_from_doc, cone_from_doc, dumps, element_to_doc, geometry_from_doc, load_json,
                            novikov_to_doc, problem_from_doc, result_to_doc, series_from_doc,
                            series_to_doc, terms_from_doc, as_int, require_field)
from .transfer import transfer_cunit, transfer_mc, verify_transfer


class Output:
    """Collects text lines or a JSON document and writes them once."""

    def __init__(self, args):
        self.path = args.output
        self.json = args.format == "json"
        self.lines: list[str] = []
        self.doc = None

    def line(self, text: str = ""):
        self.lines.append(text)

    def table(self, header: Sequence[str], rows: Sequence[Sequence]):
        cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        for r in cells:
            self.line("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())

    def flush(self):
        text = dumps(self.doc) if self.json and self.doc is not None else \
            "\n".join(self.lines) + ("\n" if self.lines else "")
        if self.path:
            Path(self.path).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)


def _kind(doc) -> str:
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    if "classes" in doc:
        return "geometry"
    if "A" in doc and "M" in doc:
        return "problem"
    if "basis" in doc:
        return "algebra"
    if "expr" in doc:
        return "expression"
    if "terms" in doc:
        return "series"
    if "generators" in doc:
        return "cone"
    raise ParseError("cannot tell what kind of document this is; pass --kind")


def _budget(text: str | None):
    if not text:
        return None
    out = {}
    for part in text.split(","):
        name, _, count = part.partition("=")
        try:
            out[name.strip()] = int(count) if count else 1
        except ValueError:
            raise ParseError(f"budget entry {part!r} is not NAME=COUNT") from None
    return out


def _int_vector(text: str | None):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"{text!r} is not a comma-separated list of integers") from None


# -- commands -----------------------------------------------------------------------


def cmd_validate(args, out: Output):
    doc = load_json(args.file)
    kind = _kind(doc) if args.kind == "auto" else args.kind
    summary = {"kind": kind, "valid": True}
    if kind == "cone":
        cone = cone_from_doc(doc)
        summary["p_count"] = cone.p_count
    elif kind == "series":
        s = series_from_doc(doc, cone_from_doc(require_field(doc, "cone", where="series")))
        summary["terms"] = len(s)
    elif kind == "algebra":
        alg = algebra_from_doc(doc)
        summary.update(rank=alg.rank, trunc_order=alg.trunc_order, arities=sorted(alg.ops))
    elif kind == "geometry":
        geom = geometry_from_doc(doc)
        summary.update(n=geom.n, divisors=len(geom.divisors), classes=len(geom.classes))
    elif kind == "problem":
        p = problem_from_doc(doc)
        summary.update(rank_A=p.A.rank, rank_B=p.B.rank, rank_M=p.M.rank, trunc_order=p.trunc_order)
    elif kind == "expression":
        _evaluate_expression(doc)
    else:
        raise ParseError(f"unknown kind {kind!r}")
    out.doc = summary
    out.line(f"{args.file}: valid {kind}")
    for key in sorted(summary):
        if key not in ("kind", "valid"):
            out.line(f"  {key}: {summary[key]}")


def _report_rows(name, report):
    return [(name, ", ".join(tup), "; ".join(f"{o}: {s!r}" for o, s in vec.items()))
            for tup, vec in report.violations]


def cmd_check(args, out: Output):
    doc = load_json(args.file)
    kind = _kind(doc)
    reports = []
    if kind == "algebra":
        alg = algebra_from_doc(doc)
        if args.trunc_order:
            alg = alg.truncate(args.trunc_order)
        reports.append(("algebra", check_curved_ainfty(alg, args.arity_bound, args.jobs)))
    elif kind == "problem":
        p = problem_from_doc(doc)
        n = args.trunc_order or p.A.trunc_order
        A, B, M = p.A.truncate(n), p.B.truncate(n), p.M.truncate(n)
        reports.append(("A", check_curved_ainfty(A, args.arity_bound, args.jobs)))
        reports.append(("B", check_curved_ainfty(B, args.arity_bound, args.jobs)))
        reports.append(("M", check_bimodule(M, args.arity_bound, args.jobs)))
        reports.append(("triangle", check_curved_ainfty(assemble_triangle(A, B, M), args.arity_bound,
                                                        args.jobs)))
    else:
        raise ParseError(f"check expects an algebra or problem document, got {kind}")
    out.doc = {name: {"arity_bound": r.arity_bound, "passed": r.passed,
                      "violations": [{"inputs": list(t), "residual": {o: repr(s) for o, s in v.items()}}
                                     for t, v in r.violations]}
               for name, r in reports}
    rows = [row for name, r in reports for row in _report_rows(name, r)]
    for name, r in reports:
        out.line(f"{name}: {'PASS' if r.passed else 'FAIL'} (arity ≤ {r.arity_bound}, "
                 f"{len(r.violations)} violations)")
    if rows:
        out.table(("structure", "inputs", "residual"), rows)
        raise PropertyCheckError("A∞ relations fail")


def cmd_transfer(args, out: Output):
    p = problem_from_doc(load_json(args.file))
    n = args.trunc_order or p.trunc_order
    try:
        result = transfer_mc(p.A, p.B, p.M, p.m0, p.b, n)
    except ObstructionError as exc:
        out.doc = {"obstructed": True, "order": exc.order,
                   "monomial": list(exc.monomial) if exc.monomial is not None else None}
        out.line(f"obstructed at order {exc.order}, monomial {exc.monomial}")
        raise
    checks = verify_transfer(p.A, p.B, p.M, p.m0, p.b, result)
    doc = result_to_doc(result, p.A.truncate(n), p.M)
    doc["checks"] = checks
    if args.cunit and p.unit_b is not None:
        e_a, ok = transfer_cunit(p.A, p.B, p.M, result, p.b, p.unit_b, p.m0)
        checks["c_unit"] = ok
        doc["e_a"] = element_to_doc(e_a, p.A.names)
    out.doc = doc
    out.line(f"transfer solved to order {result.order_achieved}")
    out.line(f"a = {_show(result.a, p.A.names)}")
    out.line(f"m = {_show(result.m, p.M.names)}")
    out.table(("check", "result"), [(k, "PASS" if v else "FAIL") for k, v in checks.items()])
    if not all(checks.values()):
        raise PropertyCheckError("transfer result fails independent verification")


def _show(x, names) -> str:
    if not x.coeffs:
        return "0"
    return " + ".join(f"({s!r})·{names[i]}" for i, s in sorted(x.coeffs.items()))


def _type_row(item):
    idx, gamma, geom = item
    loss, overlap = bound_slack(gamma, geom)
    return (idx, gamma.vertex_count, dim_gamma(gamma, geom), dim_upper_bound(gamma, geom),
            loss, overlap, gamma.describe(geom))


def cmd_enumerate(args, out: Output):
    if args.dm:
        if args.ell is None:
            raise ParseError("--dm needs --ell")
        strata = enumerate_dm_strata(args.k, args.ell, args.max_vertices)
        rows = [(i, s.codimension, s.disc_edges, s.sphere_edges, s.real_dimension(), s.code())
                for i, s in enumerate(strata)]
        out.doc = {"k": args.k, "ell": args.ell, "top_dimension": top_dimension(args.k, args.ell),
                   "strata": [{"code": r[5], "codimension": r[1], "disc_edges": r[2],
                               "sphere_edges": r[3], "dimension": r[4]} for r in rows]}
        out.line(f"{len(rows)} strata for (k, ℓ) = ({args.k}, {args.ell})")
        out.table(("#", "codim", "disc_edges", "sphere_edges", "dim", "tree"), rows)
        return
    if args.file is None:
        raise ParseError("enumerate needs a geometry file (or --dm)")
    geom = geometry_from_doc(load_json(args.file))
    types = enumerate_types(geom, args.k, _budget(args.budget), args.max_vertices or 1)
    items = [(i, g, geom) for i, g in enumerate(types)]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_type_row, items, chunksize=max(1, len(items) // (4 * args.jobs))))
    else:
        rows = [_type_row(it) for it in items]
    out.doc = {"k": args.k, "types": [{"dim": r[2], "bound": r[3], "chern_loss": r[4],
                                       "divisor_overlap": r[5], "type": r[6]} for r in rows]}
    out.line(f"{len(rows)} types")
    out.table(("#", "vertices", "dim", "bound", "chern_loss", "overlap", "type"), rows)
    if any(r[2] > r[3] for r in rows):
        raise PropertyCheckError("a type exceeds its dimension bound")


def cmd_exclude(args, out: Output):
    geom = geometry_from_doc(load_json(args.file))
    report = sphere_exclusion(geom, args.iA, args.k, _int_vector(args.target), _budget(args.budget),
                              args.max_vertices or 2)
    configs = report.survivors if args.survivors_only else report.configs
    rows = [(c.dim, c.bound, "yes" if c.dim >= 0 else "no", c.describe(geom)) for c in configs]
    out.doc = {"iA": args.iA, "k": args.k, "disc_dim": report.disc_dim, "passed": report.passed,
               "configurations": [{"dim": r[0], "bound": r[1], "survivor": r[2] == "yes",
                                   "configuration": r[3]} for r in rows]}
    out.line(f"disc dimension {report.disc_dim}; {len(report.configs)} configurations, "
             f"{len(report.survivors)} survivors")
    out.table(("dim", "bound", "survivor", "configuration"), rows)
    if not report.passed:
        raise PropertyCheckError("a bubbled or non-canonical configuration survives")


def _evaluate_expression(doc):
    cone = cone_from_doc(require_field(doc, "cone", where="expression"))
    n = as_int(require_field(doc, "trunc_order", where="expression"), "trunc_order")

    def ev(node):
        if isinstance(node, (list, int, str)):
            return terms_from_doc(node, cone, n)
        if not isinstance(node, dict):
            raise ParseError("expression nodes are objects, term arrays or integers")
        if "terms" in node:
            return terms_from_doc(node["terms"], cone, n)
        op = require_field(node, "op", str, "expression node")
        if op in ("add", "mul"):
            args = [ev(a) for a in require_field(node, "args", list, "expression node")]
            acc = PowerSeries.constant(cone, n, 0 if op == "add" else 1)
            for a in args:
                acc = acc + a if op == "add" else acc * a
            return acc
        if op == "sub":
            a, b = require_field(node, "args", list, "expression node")
            return ev(a) - ev(b)
        if op == "neg":
            return -ev(require_field(node, "arg", where="expression node"))
        if op == "pow":
            base = ev(require_field(node, "arg", where="expression node"))
            acc = PowerSeries.constant(cone, n, 1)
            for _ in range(as_int(require_field(node, "exponent", where="expression node"), "exponent")):
                acc = acc * base
            return acc
        if op == "truncate":
            order = as_int(require_field(node, "order", where="expression node"), "order")
            return ev(require_field(node, "arg", where="expression node")).truncate(order)
        raise ParseError(f"unknown expression operator {op!r}")

    value = ev(require_field(doc, "expr", where="expression"))
    kappa = doc.get("specialize")
    return value, (Specialization(cone, kappa)(value) if kappa is not None else None)


def cmd_series(args, out: Output):
    doc = load_json(args.file)
    value, special = _evaluate_expression(doc)
    result = series_to_doc(value)
    result["cone"] = doc["cone"]
    if special is not None:
        result["specialized"] = novikov_to_doc(special)
    out.doc = result
    out.json = True


def cmd_property(args, out: Output):
    suites = args.suite.split(",") if args.suite else ["ring", "novikov", "snf", "cone"]
    kappas = [(1, 2), (2, 1), (1, 2, 3)]
    results = {}
    for suite in suites:
        if suite == "ring":
            bad = [b for c in standard_cones() for b in check_ring_laws(c, args.trunc_order or 6,
                                                                      args.cases or 1000, args.seed)]
        elif suite == "novikov":
            bad = [b for c, k in zip(standard_cones(), kappas)
                   for b in check_novikov(c, k, args.trunc_order or 6, args.cases or 500, args.seed)]
        elif suite == "snf":
            bad = check_snf(args.cases or 1000, args.seed)
        elif suite == "cone":
            bad = check_cone_acyclicity(args.cases or 200, args.seed)
        else:
            raise ParseError(f"unknown property suite {suite!r}")
        results[suite] = bad
    out.doc = {s: {"passed": not b, "failures": b} for s, b in results.items()}
    out.table(("suite", "result", "failures"),
              [(s, "PASS" if not b else "FAIL", len(b)) for s, b in results.items()])
    for b in (x for bad in results.values() for x in bad[:5]):
        out.line(b)
    if any(results.values()):
        raise PropertyCheckError("property checks found counterexamples")


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--trunc-order", type=int, help="truncation order N")
    common.add_argument("--arity-bound", type=int, help="largest arity checked in relations")
    common.add_argument("--max-vertices", type=int, help="vertex bound for enumerations")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    parser = argparse.ArgumentParser(prog="curvedainf", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse a document and check invariants")
    p.add_argument("file")
    p.add_argument("--kind", default="auto",
                   choices=("auto", "cone", "series", "algebra", "geometry", "problem", "expression"))
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", parents=[common], help="check curved A∞ relations")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transfer", parents=[common], help="solve a Maurer–Cartan transfer problem")
    p.add_argument("file")
    p.add_argument("--cunit", action="store_true", help="also lift the unit of B")
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("enumerate", parents=[common], help="list combinatorial types or DM strata")
    p.add_argument("file", nargs="?")
    p.add_argument("--k", type=int, default=0, help="number of marked (boundary) points")
    p.add_argument("--ell", type=int, help="interior points, with --dm")
    p.add_argument("--dm", action="store_true", help="enumerate strata of discs instead")
    p.add_argument("--budget", help="class multiplicities, e.g. A=1,B=2")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("exclude", parents=[common], help="run the sphere-exclusion count")
    p.add_argument("file")
    p.add_argument("--iA", type=int, required=True, help="index of the disc class")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--target", help="A·V_q per divisor, comma separated")
    p.add_argument("--budget", help="class multiplicities, e.g. A=1,B=2")
    p.add_argument("--survivors-only", action="store_true")
    p.set_defaults(func=cmd_exclude)

    p = sub.add_parser("series", parents=[common], help="evaluate a series expression")
    p.add_argument("file")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("property", parents=[common], help="seeded randomized identity checks")
    p.add_argument("--suite", help="comma-separated subset of ring,novikov,snf,cone")
    p.add_argument("--cases", type=int, help="cases per suite")
    p.set_defaults(func=cmd_property)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trunc_order is not None and args.trunc_order < 1:
        parser.error("--trunc-order must be at least 1")
    out = Output(args)
    status = 0
    try:
        args.func(args, out)
    except tuple(EXIT_CODES) as exc:
        status = next(code for cls, code in EXIT_CODES.items() if isinstance(exc, cls))
        print(f"error: {exc}", file=sys.stderr)
    out.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
