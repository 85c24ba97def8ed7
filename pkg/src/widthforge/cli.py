"""Command-line front end: encode, solve, verify, oracle, and bench."""
from __future__ import annotations

import argparse
import json
import sys

from .bench import make_suite, run_bench, write_csv
from .cnf import CnfFormula, VarRegistry, write_dimacs
from .graph import GraphFormatError, parse_graph
from .oracle import TCW_BUDGET, TD_BUDGET, oracle_tcw_general, oracle_td
from .search import (
    WidthResult,
    certificate_from_json,
    certificate_to_json,
    search_width,
    verify_tcw_certificate,
)
from .solver import SolverConfig, SolverError, resolve_solver
from .tcw import decomposition_from_json, encode_derivation, encode_width, verify_tcw
from .td import (
    add_td_symmetry,
    encode_td_partition,
    encode_td_treestructure,
    forest_from_json,
    forest_to_json,
    verify_td,
)

USAGE_ERROR = 2
VERIFY_ERROR = 1


def _read_graph(path: str):
    try:
        with open(path) as handle:
            return parse_graph(handle.read())
    except OSError as exc:
        raise SystemExit(f"cannot read graph file: {exc}")
    except GraphFormatError as exc:
        raise SystemExit(f"bad graph file {path}: {exc}")


def _cmd_encode(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    reg = VarRegistry()
    formula = CnfFormula(reg)
    try:
        if args.param == "tcw":
            levels = args.levels if args.levels is not None else max(2, g.n)
            encode_derivation(g, levels, reg, formula)
            encode_width(g, levels, args.width, reg, formula)
        elif args.param == "td":
            encode_td_partition(g, args.width, reg, formula)
            if not args.no_symmetry:
                add_td_symmetry(g, args.width, reg, formula)
        else:  # td-tree
            encode_td_treestructure(g, args.width, reg, formula)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    text = write_dimacs(formula)
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
        print(f"wrote {formula.variable_count} variables, {formula.clause_count} clauses to {args.output}")
    else:
        sys.stdout.write(text)
    return 0


def _result_to_json(result: WidthResult) -> dict:
    payload = {
        "parameter": result.parameter,
        "status": result.status,
        "lower": result.lower,
        "upper": result.upper,
        "calls": [
            {
                "task": c.task,
                "bound": c.bound,
                "verdict": c.verdict,
                "seconds": round(c.seconds, 4),
                "variables": c.variables,
                "clauses": c.clauses,
            }
            for c in result.calls
        ],
        "note": result.note,
    }
    if result.certificate is None:
        payload["decomposition"] = None
    elif result.parameter == "tcw":
        payload["decomposition"] = certificate_to_json(result.certificate)
    else:
        payload["decomposition"] = forest_to_json(result.certificate)
    return payload


def _cmd_solve(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    try:
        cfg = SolverConfig(
            executable=resolve_solver(args.solver),
            extra_args=tuple(args.solver_arg) if args.solver_arg else None,
            per_call_timeout=args.call_timeout,
            overall_timeout=args.total_timeout,
        )
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    strategy = "binary" if args.strategy == "binary" else "linear"
    result = search_width(
        g,
        args.param,
        cfg,
        strategy,
        preprocess=not args.no_preprocess,
        symmetry=not args.no_symmetry,
    )
    if result.status == "exact":
        print(f"{args.param} = {result.upper} (exact, {len(result.calls)} SAT calls)")
    elif result.status == "bounded":
        print(f"{args.param} in [{result.lower}, {result.upper}] (timeout)")
    else:
        print(f"{args.param} unknown: {result.note}", file=sys.stderr)
    if args.output:
        with open(args.output, "w") as handle:
            json.dump(_result_to_json(result), handle, indent=2)
            handle.write("\n")
    return 0 if result.status != "unknown" else 1


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    try:
        with open(args.decomposition) as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read decomposition: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if isinstance(data, dict) and "decomposition" in data:
        data = data["decomposition"]  # accept whole solve result files
    if args.param == "tcw":
        if isinstance(data, dict) and data.get("kind") == "tcw-certificate":
            verdict = verify_tcw_certificate(g, certificate_from_json(data))
        else:
            verdict = verify_tcw(decomposition_from_json(data), g)
        if verdict.valid:
            print(f"valid treecut decomposition, width {verdict.width}")
            return 0
        print(f"invalid: {verdict.reason}", file=sys.stderr)
        return VERIFY_ERROR
    verdict = verify_td(forest_from_json(data), g)
    if verdict.valid:
        print(f"valid treedepth decomposition, depth {verdict.depth}")
        return 0
    print(f"invalid: {verdict.reason}", file=sys.stderr)
    return VERIFY_ERROR


def _cmd_oracle(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    if args.param == "td":
        budget = args.max_vertices if args.max_vertices else TD_BUDGET
        value = oracle_td(g, budget)
    else:
        budget = args.max_vertices if args.max_vertices else TCW_BUDGET
        value = oracle_tcw_general(g, budget)
    print(f"{args.param} = {value} (brute force)")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    try:
        instances = make_suite(args.suite, args.gen_params)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        cfg = SolverConfig(
            executable=resolve_solver(args.solver),
            per_call_timeout=args.call_timeout,
            overall_timeout=args.total_timeout,
        )
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    params = ("tcw", "td") if args.param == "both" else (args.param,)
    rows = run_bench(
        instances,
        params,
        cfg,
        jobs=args.jobs,
        check_relations=args.check_relations,
    )
    if args.output:
        with open(args.output, "w", newline="") as handle:
            write_csv(rows, handle)
        print(f"wrote {len(rows)} rows to {args.output}")
    else:
        write_csv(rows, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="widthforge",
        description="Exact treecut width and treedepth via CNF encodings and an external SAT solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encode", help="emit a DIMACS CNF for one width query")
    enc.add_argument("--param", choices=("tcw", "td", "td-tree"), required=True)
    enc.add_argument("--width", type=int, required=True,
                     help="width bound: tcw width, td derivation length (depth+1), td-tree depth")
    enc.add_argument("--levels", type=int, default=None, help="tcw only: derivation levels (default n)")
    enc.add_argument("--graph", required=True)
    enc.add_argument("--no-symmetry", action="store_true", help="td only: skip symmetry clauses")
    enc.add_argument("-o", "--output", default=None)
    enc.set_defaults(func=_cmd_encode)

    sol = sub.add_parser("solve", help="compute a width exactly with certificates")
    sol.add_argument("--param", choices=("tcw", "td"), required=True)
    sol.add_argument("--graph", required=True)
    sol.add_argument("--solver", default=None, help="solver executable (default $WIDTHFORGE_SOLVER)")
    sol.add_argument("--solver-arg", action="append", default=None,
                     help="extra solver argument (repeatable; overrides built-in defaults)")
    sol.add_argument("--strategy", choices=("linear", "binary"), default="linear")
    sol.add_argument("--call-timeout", type=float, default=2000.0, help="seconds per SAT call")
    sol.add_argument("--total-timeout", type=float, default=6 * 3600.0, help="overall seconds")
    sol.add_argument("--no-preprocess", action="store_true")
    sol.add_argument("--no-symmetry", action="store_true")
    sol.add_argument("-o", "--output", default=None, help="write the result record as JSON")
    sol.set_defaults(func=_cmd_solve)

    ver = sub.add_parser("verify", help="check a decomposition file against a graph")
    ver.add_argument("--param", choices=("tcw", "td"), required=True)
    ver.add_argument("--graph", required=True)
    ver.add_argument("--decomposition", required=True)
    ver.set_defaults(func=_cmd_verify)

    orc = sub.add_parser("oracle", help="brute-force width of a small graph")
    orc.add_argument("--param", choices=("tcw", "td"), required=True)
    orc.add_argument("--graph", required=True)
    orc.add_argument("--max-vertices", type=int, default=None)
    orc.set_defaults(func=_cmd_oracle)

    ben = sub.add_parser("bench", help="run a suite and write a CSV table")
    ben.add_argument("--suite", choices=("famous", "standard", "random"), required=True)
    ben.add_argument("--gen-params", default=None,
                     help='suite options, e.g. "n=8,p=0.3,count=5,seed=1" or "families=path+cycle,sizes=8+16"')
    ben.add_argument("--param", choices=("tcw", "td", "both"), default="both")
    ben.add_argument("--solver", default=None)
    ben.add_argument("--call-timeout", type=float, default=2000.0)
    ben.add_argument("--total-timeout", type=float, default=6 * 3600.0)
    ben.add_argument("--jobs", type=int, default=1)
    ben.add_argument("--check-relations", action="store_true",
                     help="re-verify certificates on every exact row")
    ben.add_argument("-o", "--output", default=None)
    ben.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
