"""Command-line front end: ``paramfeas <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bn
from .dsl import DSLError, load, parse_expression
from .elimination import INTEGER, MODES, DomainSigns, Inconclusive, eliminate_all
from .exact import format_poly
from .pipeline import (CERTIFIED, PATCHED, REFUTED, ConfigError, PreconditionError, RunConfig,
                       check_fixed, effective_problem, run)
from .polyhedron import UnboundedError, enumerate_edges, instantiate
from .positivity import BivarPoly, certify_positive

EXIT_OK, EXIT_REFUTED, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3
VERDICT_EXIT = {CERTIFIED: EXIT_OK, PATCHED: EXIT_OK, REFUTED: EXIT_REFUTED}


class InputError(Exception):
    pass


def exit_code(verdict: str) -> int:
    return VERDICT_EXIT.get(verdict, EXIT_UNKNOWN)


def dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load(path: str):
    return load(_read(path))


def _parse_fix(items) -> dict:
    values = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise InputError(f"--fix expects name=value, got {item!r}")
        try:
            values[name.strip()] = int(value)
        except ValueError:
            raise InputError(f"--fix value for {name.strip()} must be an integer") from None
    return values


def _config(args) -> RunConfig:
    kw = {}
    if args.k_max is not None:
        kw["k_max"] = args.k_max
    if args.patch_cap is not None:
        kw["max_patch_points"] = args.patch_cap
    if args.order:
        kw["order"] = tuple(args.order.split(","))
    for flag, key in (("binom_lower", "binom_lower"), ("binom_upper", "binom_upper")):
        text = getattr(args, flag)
        if text:
            kw[key] = parse_expression(text, symbols=("r", "k"))
    return RunConfig(timing=args.timing, **kw, exact_branch=args.exact_branch)


# -- output ------------------------------------------------------------------

def _emit(args, text: str):
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _report_text(report) -> str:
    lines = [f"verdict: {report.verdict}"]
    if report.witness:
        lines.append(f"witness: {json.dumps(report.witness, sort_keys=True)}")
    if report.diagnosis:
        lines.append(f"diagnosis: {report.diagnosis}")
    for i, d in enumerate(report.disjuncts):
        lines.append(f"disjunct {i + 1}:")
        if d.reason:
            lines.append(f"  elimination inconclusive: {d.reason}")
        for c in d.constraints:
            extra = f" ({c.reason})" if c.reason else ""
            lines.append(f"  {c.poly}: {c.status}{extra}")
    if report.patches:
        counts = {}
        for p in report.patches:
            counts[p.verdict] = counts.get(p.verdict, 0) + 1
        summary = ", ".join(f"{n} {v}" for v, n in sorted(counts.items()))
        lines.append(f"patches: {len(report.patches)} points checked ({summary})")
    if report.timing_ms is not None:
        lines.append(f"time: {report.timing_ms} ms")
    return "\n".join(lines) + "\n"


def _fixed_text(res, names) -> str:
    params = ", ".join(f"{p}={v}" for p, v in res.params.items())
    lines = [f"parameters: {params or '(none)'}", f"verdict: {'Satisfied' if res.satisfied else 'Failed'}"]
    if res.vacuous:
        lines.append("base polytope is empty (vacuous)")
        return "\n".join(lines) + "\n"
    lines.append("vertices:")
    for v in res.vertices:
        coords = ", ".join(str(c) for c in v.coords)
        lines.append(f"  ({coords}) {'integral' if v.is_integral else 'non-integral'}")
    if res.covering is not None:
        cov = res.covering
        lines.append(f"covering: {'Covered' if cov.covered else 'NotCovered'}")
        for v, a, b in cov.vertices:
            coords = ", ".join(str(c) for c in v.coords)
            lines.append(f"  vertex ({coords}): in C1={a} in C2={b}")
        for e in cov.edges:
            u, w = (", ".join(str(c) for c in x.coords) for x in e.edge.endpoints)
            iv = "empty" if e.interval is None else f"[{e.interval[0]}, {e.interval[1]}]"
            lines.append(f"  edge ({u}) -> ({w}): C1&C2 interval {iv}")
        if cov.witness is not None:
            lines.append(f"  uncovered point: ({', '.join(str(c) for c in cov.witness)})")
    b = res.brute
    lines.append(f"lattice points checked: {b.points_checked}")
    if b.counterexample is not None:
        pt = ", ".join(f"{n}={c}" for n, c in zip(names, b.counterexample))
        lines.append(f"counterexample: {pt}")
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    problem = _load(args.file)
    report = run(problem, _config(args))
    data = report.to_dict()
    _emit(args, dump_json(data) if args.format == "json" else _report_text(report))
    return exit_code(report.verdict)


def cmd_eliminate(args) -> int:
    problem = _load(args.file)
    if problem.blocks and args.block is not None:
        i = args.block - 1
        if not 0 <= i < len(problem.blocks):
            raise InputError(f"block must be between 1 and {len(problem.blocks)}")
        rows, names = problem.block_polys(i), problem.blocks[i].new_vars
    else:
        rows, names = problem.base_polys, problem.vars
    if args.order is None:
        order = list(reversed(names))
    else:
        order = [v.strip() for v in args.order.split(",") if v.strip()]
    unknown = [v for v in order if v not in names]
    if unknown:
        raise InputError(f"cannot eliminate undeclared variable(s) {unknown}")
    signs = DomainSigns(problem.params.get("r", 0), problem.params.get("k", 0))
    try:
        out = eliminate_all(rows, order, args.mode, signs)
    except Inconclusive as exc:
        sys.stderr.write(f"inconclusive: {exc}\n")
        return EXIT_UNKNOWN
    polys = [f"{format_poly(p)} >= 0" for p in out]
    if args.format == "json":
        _emit(args, dump_json({"mode": args.mode, "order": order, "system": polys}))
    else:
        _emit(args, "".join(p + "\n" for p in polys) or "# no constraints remain\n")
    return EXIT_OK


def cmd_prove_pos(args) -> int:
    p = parse_expression(args.expr, symbols=("r", "k"))
    res = certify_positive(BivarPoly.from_multipoly(p), args.r0, args.k0,
                           exact_branch=args.exact_branch)
    if args.format == "json":
        _emit(args, dump_json({"certified": res.certified, **res.to_dict()}))
    else:
        head = "certified" if res.certified else f"inconclusive: condition ({res.failed}) {res.reason}"
        lines = [f"{format_poly(p)} > 0 on r >= {args.r0}, k >= {args.k0}: {head}"]
        for c in res.conditions:
            lines.append(f"  ({c.name}) {'pass' if c.passed else 'fail'}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if res.certified else EXIT_UNKNOWN


def cmd_fixed(args) -> int:
    problem = _load(args.file)
    values = _parse_fix(args.fix)
    try:
        res = check_fixed(problem, values)
    except UnboundedError as exc:
        sys.stderr.write(f"unbounded: {exc}\n")
        return EXIT_UNKNOWN
    names = effective_problem(problem).vars
    if args.format == "json":
        data = res.to_dict()
        if res.vertices:
            base = instantiate(effective_problem(problem).base_polys, res.params, names)
            data["edges"] = [[[str(c) for c in v.coords] for v in e.endpoints]
                             for e in enumerate_edges(base, res.vertices)]
        _emit(args, dump_json(data))
    else:
        _emit(args, _fixed_text(res, names))
    return EXIT_OK if res.satisfied else EXIT_REFUTED


def _fmt(x) -> str:
    if isinstance(x, tuple):
        return " ".join(_fmt(y) for y in x)
    return str(x)


def cmd_bn(args) -> int:
    q, a = args.query, args.args
    need = {"rho": 3, "bound": 3, "guaranteed": 3, "vanishing": 4, "vertex": 2, "binom": 2,
            "exceptions": 1, "is-exception": None, "contexts": 0}
    if need[q] is not None and len(a) != need[q]:
        raise InputError(f"bn {q} takes {need[q]} argument(s)")
    if q == "contexts":
        out = bn.contexts()
    elif q == "exceptions":
        out = [_fmt(t) for t in bn.exceptions(a[0])]
    elif q == "is-exception":
        if len(a) < 2:
            raise InputError("bn is-exception takes a context and a tuple")
        out = [str(bn.is_exception(a[0], [int(x) for x in a[1:]])).lower()]
    else:
        nums = [int(x) for x in a]
        fn = {"rho": bn.rho, "bound": bn.max_points_bound, "guaranteed": bn.max_points_guaranteed,
              "vanishing": bn.expected_vanishing_dim, "vertex": bn.mrc_vertex_demo,
              "binom": bn.binom_eval}[q]
        out = [_fmt(fn(*nums))]
    _emit(args, "".join(line + "\n" for line in out))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paramfeas",
                                     description="Certify parametric integer feasibility problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file=True):
        if file:
            p.add_argument("file", help="problem file, or - for stdin")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")

    p = sub.add_parser("check", help="run the full certification pipeline")
    common(p)
    p.add_argument("--k-max", type=int, help="last k value specialised for constraints with B")
    p.add_argument("--patch-cap", type=int, help="largest patch region enumerated")
    p.add_argument("--order", help="comma-separated elimination order")
    p.add_argument("--binom-lower", help="asserted lower bound on B for k beyond --k-max")
    p.add_argument("--binom-upper", help="asserted upper bound on B for k beyond --k-max")
    p.add_argument("--exact-branch", action="store_true", help="locate branch points with Sturm sequences")
    p.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("eliminate", help="eliminate variables and print the remaining system")
    common(p)
    p.add_argument("--mode", choices=MODES, default=INTEGER)
    p.add_argument("--order", help="comma-separated variables to eliminate (default: all, last first)")
    p.add_argument("--block", type=int, help="eliminate the new variables of this goal block (1-based)")
    p.set_defaults(func=cmd_eliminate)

    p = sub.add_parser("prove-pos", help="certify positivity of a polynomial in r and k")
    p.add_argument("expr")
    p.add_argument("--r0", type=int, required=True)
    p.add_argument("--k0", type=int, required=True)
    p.add_argument("--exact-branch", action="store_true")
    common(p, file=False)
    p.set_defaults(func=cmd_prove_pos)

    p = sub.add_parser("fixed", help="decide the problem at fixed parameter values")
    common(p)
    p.add_argument("--fix", action="append", metavar="NAME=VALUE", help="parameter value (repeatable)")
    p.set_defaults(func=cmd_fixed)

    p = sub.add_parser("bn", help="Brill-Noether numerology and exception tables")
    p.add_argument("query", choices=("rho", "bound", "guaranteed", "vanishing", "exceptions",
                                     "is-exception", "contexts", "vertex", "binom"))
    p.add_argument("args", nargs="*")
    common(p, file=False)
    p.set_defaults(func=cmd_bn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DSLError, PreconditionError, ConfigError, KeyError, ValueError,
            ZeroDivisionError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
