"""Command-line entry point ``dicolor``.

Exit codes: 0 success, 2 input has a directed triangle, 3 verification or
invariant failure, 4 oracle undecided within its budget, 5 usage or parse
error.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .coloring import NotC3FreeError, RunReport, color_c3_free
from .digraph import Digraph, find_directed_triangle
from .formats import ParseError, parse_digraph_file, write_coloring_file, write_digraph_file
from .instances import FAMILIES, InstanceSpec, generate
from .oracles import BudgetExhausted, CapExceeded, dichromatic_number, independence_number, max_acyclic_set
from .structure import find_mountain, find_rs_clique, is_r_thick

EXIT_OK = 0
EXIT_NOT_C3_FREE = 2
EXIT_INVALID = 3
EXIT_UNDECIDED = 4
EXIT_USAGE = 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _one_based(vertices) -> list[int]:
    return [v + 1 for v in vertices]


def oracle_report(report: RunReport, D: Digraph, budget: int | None, chi: bool = True) -> bool:
    """Fill exact alpha/chi into ``report``; False if an oracle ran out of budget."""
    try:
        report.set_alpha("exact", independence_number(D, budget).value)
        if chi:
            report.oracle_chi = dichromatic_number(D, budget).value
    except BudgetExhausted:
        return False
    return True


def _check_report(report: RunReport) -> list[str]:
    problems = []
    if report.valid is False:
        problems.append("coloring failed verification")
    if report.violations:
        problems.append(f"{len(report.violations)} invariant violations")
    if report.within_budget is False:
        problems.append(f"{report.colors_used} colors exceed budget {report.budget}")
    return problems


def cmd_color(args) -> int:
    D = parse_digraph_file(args.input)
    try:
        coloring, report = color_c3_free(D)
    except NotC3FreeError as exc:
        print("not C3-free; directed triangle: " + " ".join(map(str, _one_based(exc.triangle))), file=sys.stderr)
        if args.json:
            print(_dump({"c3free": False, "triangle": _one_based(exc.triangle)}))
        return EXIT_NOT_C3_FREE
    report.instance = {"file": str(args.input)}
    decided = True
    if args.oracle:
        decided = oracle_report(report, D, args.budget)
    if args.output:
        write_coloring_file(coloring, args.output)
    if args.json:
        print(_dump(report.to_json(timings=not args.no_timings)))
    else:
        print(f"n={report.n} arcs={report.arcs} colors_used={report.colors_used} valid={report.valid}")
        if report.alpha["value"] is not None:
            print(f"alpha={report.alpha['value']} budget={report.budget} oracle_chi={report.oracle_chi}")
        if not args.no_timings:
            print("wall_time " + " ".join(f"{k}={v:.4f}s" for k, v in report.timings.items()))
    problems = _check_report(report)
    for p in problems:
        print(f"error: {p}", file=sys.stderr)
    if problems:
        return EXIT_INVALID
    if not decided:
        print("error: oracle undecided within budget", file=sys.stderr)
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_exact(args) -> int:
    D = parse_digraph_file(args.input)
    solver = {"chi": dichromatic_number, "alpha": independence_number, "beta": max_acyclic_set}[args.quantity]
    try:
        res = solver(D, args.budget)
    except BudgetExhausted as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        if args.json:
            print(_dump({"quantity": args.quantity, "value": None, "explored": exc.explored}))
        return EXIT_UNDECIDED
    if args.quantity == "chi":
        witness = {"colors": list(res.witness.colors)}
        text = " ".join(map(str, res.witness.colors))
    else:
        witness = {"vertices": _one_based(sorted(res.witness))}
        text = " ".join(map(str, witness["vertices"]))
    if args.json:
        print(_dump({"quantity": args.quantity, "value": res.value, "explored": res.explored, "witness": witness}))
    else:
        print(f"{args.quantity} {res.value}")
        print(f"witness {text}")
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = InstanceSpec(args.family, args.n, seed=args.seed, alpha=args.alpha, p=args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    D = generate(spec)
    write_digraph_file(D, args.output, comment=spec.ident)
    return EXIT_OK


def _relabel_cert(cert) -> dict:
    data = cert.to_json()

    def fix(node):
        node["clique"] = _one_based(node["clique"])
        node["vertices"] = _one_based(node["vertices"])
        for sub in node["certificates"]:
            sub["arc"] = _one_based(sub["arc"])
            fix(sub["certificate"])
        return node

    return fix(data)


def cmd_detect(args) -> int:
    D = parse_digraph_file(args.input)
    try:
        if args.what == "triangle":
            tri = find_directed_triangle(D)
            result = None if tri is None else {"triangle": _one_based(tri)}
        elif args.what == "mountain":
            cert = find_mountain(D, args.r)
            result = None if cert is None else _relabel_cert(cert)
        elif args.what == "clique":
            found = find_rs_clique(D, args.r, args.s)
            if found is None:
                result = None
            else:
                clique, certs = found
                result = {
                    "clique": _one_based(sorted(clique)),
                    "certificates": [
                        {"arc": _one_based(arc), "certificate": _relabel_cert(c)} for arc, c in sorted(certs.items())
                    ],
                }
        else:
            u, v = args.u - 1, args.v - 1
            if not (0 <= u < D.n and 0 <= v < D.n) or not D.has_arc(u, v):
                raise UsageError(f"{args.u} -> {args.v} is not an arc")
            cert = is_r_thick(D, u, v, args.r)
            result = None if cert is None else _relabel_cert(cert)
    except CapExceeded as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        print(_dump({"detect": args.what, "found": result is not None, "witness": result}))
    elif result is None:
        print("none")
    elif args.what == "triangle":
        print(" ".join(map(str, result["triangle"])))
    else:
        print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def load_suite(path) -> list[InstanceSpec]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    items = data["instances"] if isinstance(data, dict) else data
    try:
        return [InstanceSpec.from_json(item) for item in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad suite file: {exc}") from exc


def run_spec(spec: InstanceSpec, oracle_max_n: int = 12, budget: int | None = None) -> RunReport:
    clock = time.perf_counter()
    D = generate(spec)
    gen_time = time.perf_counter() - clock
    try:
        _, report = color_c3_free(D)
    except NotC3FreeError:
        report = RunReport(n=D.n, arcs=D.num_arcs, c3free=False)
    report.instance = {"id": spec.ident, **spec.to_json()}
    report.timings["generate"] = gen_time
    if not report.c3free:
        return report
    decided = D.n <= oracle_max_n and oracle_report(report, D, budget)
    if not decided and spec.family == "c3free-layered":
        report.set_alpha("by-construction", spec.alpha)
    elif not decided and spec.family == "transitive":
        report.set_alpha("by-construction", 1)
    return report


def _run_spec_json(args):
    spec, oracle_max_n, budget, timings = args
    return run_spec(spec, oracle_max_n, budget).to_json(timings=timings)


def bench_summary(reports: list[dict]) -> dict:
    colored = [r for r in reports if r["c3free"]]
    ratios = [r["colors_used"] / r["budget"] for r in colored if r["budget"]]
    summary = {
        "instances": len(reports),
        "colored": len(colored),
        "skipped_not_c3free": len(reports) - len(colored),
        "invalid": sum(1 for r in colored if r["valid"] is not True),
        "invariant_violations": sum(r["invariant_violations"] for r in colored),
        "over_budget": sum(1 for r in colored if r["budget"] and r["colors_used"] > r["budget"]),
        "max_colors": max((r["colors_used"] for r in colored), default=0),
        "max_colors_budget_ratio": max(ratios, default=None),
    }
    if colored and "wall_time" in colored[0]:
        by_n: dict[int, list[float]] = {}
        for r in colored:
            t = r["wall_time"]
            by_n.setdefault(r["n"], []).append(t.get("chain", 0.0) + t.get("color", 0.0))
        summary["timing_vs_n"] = [
            {"n": n, "count": len(ts), "mean_s": round(statistics.fmean(ts), 6), "max_s": round(max(ts), 6)}
            for n, ts in sorted(by_n.items())
        ]
    return summary


def cmd_bench(args) -> int:
    specs = load_suite(args.suite)
    jobs = [(s, args.oracle_max_n, args.budget, not args.no_timings) for s in specs]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(_run_spec_json, jobs))
    else:
        reports = [_run_spec_json(j) for j in jobs]
    summary = bench_summary(reports)
    if args.json:
        print(_dump({"reports": reports, "summary": summary}))
    else:
        for r in reports:
            inst = r["instance"]["id"]
            if not r["c3free"]:
                print(f"{inst}: skipped (contains a directed triangle)")
                continue
            print(f"{inst}: colors={r['colors_used']} budget={r['budget']} valid={r['valid']} violations={r['invariant_violations']}")
        print(_dump(summary))
    if summary["invalid"] or summary["invariant_violations"] or summary["over_budget"]:
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dicolor", description="Acyclic colorings of C3-free digraphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("color", help="color a C3-free digraph")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--verify", action="store_true", help="fail (exit 3) unless the coloring verifies; always on")
    p.add_argument("--oracle", action="store_true", help="compute exact alpha and chi for the report")
    p.add_argument("--budget", type=int, default=None, help="oracle node budget")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-timings", action="store_true", help="omit wall times so output is byte-reproducible")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("exact", help="exact chi, alpha or beta")
    p.add_argument("quantity", choices=["chi", "alpha", "beta"])
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("detect", help="structural witnesses")
    p.add_argument("what", choices=["triangle", "mountain", "clique", "thick"])
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-r", type=int, default=1)
    p.add_argument("-s", type=int, default=2)
    p.add_argument("-u", type=int)
    p.add_argument("-v", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("bench", help="run a suite of generated instances")
    p.add_argument("--suite", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--oracle-max-n", type=int, default=12, help="largest n given exact alpha/chi")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timings", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "detect" and args.what == "thick" and (args.u is None or args.v is None):
        parser.error("detect thick needs -u and -v")
    try:
        return args.func(args)
    except (ParseError, UsageError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
