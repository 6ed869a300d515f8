"""Command line front end.

Every subcommand prints JSON on stdout (or writes files and prints a
manifest) and reports failures as a JSON object on stderr.  Exit status:
0 success, 1 input error, 2 budget or timeout, 3 count mismatch in
``compare``.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .counter import METHODS, STRATEGIES, SymbolicContext, count
from .formula import Dqbf, ParseError, parse, serialize
from .limits import Budget, BudgetExceeded, DeadlineExceeded
from .reachability import NotTwoDqbf

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3


class InputError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _emit_error(kind: str, message: str, **extra) -> None:
    print(_dump({"schema": 1, "error": kind, "message": message, **extra}), file=sys.stderr)


def _detect_format(text: str) -> str:
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            return "circuit"
        if line.startswith("c ") or line == "c":
            continue
        return "dqdimacs" if line.startswith("p ") else "circuit"
    return "circuit"


def load_instance(path: str, fmt: str = "auto") -> Dqbf:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if fmt == "auto":
        fmt = _detect_format(text)
    return parse(text, fmt)


def _budget(args) -> Budget:
    b = Budget.from_env()
    overrides = {}
    for name in ("expansion_cells", "expansion_clauses", "brute_cells", "max_nodes"):
        v = getattr(args, name, None)
        if v is not None:
            if v <= 0:
                raise InputError(f"--{name.replace('_', '-')} must be positive")
            overrides[name] = v
    if overrides:
        b = replace(b, **overrides)
    timeout = getattr(args, "timeout", None)
    if timeout is not None:
        if timeout <= 0:
            raise InputError("--timeout must be positive")
        b = b.with_timeout(timeout)
    return b


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _count_kwargs(args, method: str) -> dict:
    kw = {}
    if method in ("symbolic", "reduction", "auto"):
        kw = {"strategy": args.strategy, "prune": not args.no_prune, "jobs": args.jobs}
    return kw


def _run_count(d: Dqbf, method: str, budget: Budget, args):
    return count(d, method, budget, **_count_kwargs(args, method))


def _dump_bdd(d: Dqbf, budget: Budget, path: str) -> None:
    ctx = SymbolicContext(d, budget)
    Path(path).write_text(ctx.mgr.to_dot(ctx.tr, "closure"))


# subcommands


def cmd_count(args) -> int:
    d = load_instance(args.input, args.input_format)
    budget = _budget(args)
    if args.dump_bdd:
        _dump_bdd(d, budget, args.dump_bdd)
    report = _run_count(d, args.method, budget, args)
    if args.format == "text":
        print(f"count {report.count.format()}")
        print(f"satisfiable {str(report.satisfiable).lower()}")
        print(f"method {report.method}")
        print(f"elapsed_ms {report.elapsed_ms:.3f}")
    else:
        print(report.dumps())
    return EXIT_OK


def cmd_compare(args) -> int:
    d = load_instance(args.input, args.input_format)
    budget = _budget(args)
    methods = [m.strip() for m in args.methods.split(",")]
    if len(methods) != 2 or any(m not in METHODS or m == "auto" for m in methods):
        raise InputError(f"--methods needs two of {', '.join(m for m in METHODS if m != 'auto')}")
    reports = [_run_count(d, m, budget, args) for m in methods]
    equal = reports[0].count == reports[1].count
    out = {
        "schema": 1,
        "status": "EQUAL" if equal else "MISMATCH",
        "methods": methods,
        "counts": [r.count.to_json() for r in reports],
        "elapsed_ms": [round(r.elapsed_ms, 3) for r in reports],
    }
    print(_dump(out))
    if not equal:
        _emit_error("mismatch", f"{methods[0]} and {methods[1]} disagree",
                    counts=[r.count.format() for r in reports])
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_expand(args) -> int:
    from .expansion import expand
    d = load_instance(args.input, args.input_format)
    budget = _budget(args)
    cnf, table = expand(d, budget)
    _write(args.output, cnf.to_dimacs(table))
    if args.output and args.output != "-":
        print(_dump({
            "schema": 1, "kind": "expansion", "output": args.output,
            "variables": cnf.num_vars, "clauses": len(cnf.clauses),
        }))
    return EXIT_OK


def cmd_info(args) -> int:
    d = load_instance(args.input, args.input_format)
    budget = _budget(args)
    ctx = SymbolicContext(d, budget)
    if args.dump_bdd:
        Path(args.dump_bdd).write_text(ctx.mgr.to_dot(ctx.tr, "closure"))
    sup = ctx.support
    comps = sum(1 for _ in ctx.components()) if ctx.satisfiable else 0
    info = {
        "schema": 1,
        "satisfiable": ctx.satisfiable,
        "support_cells": [sup.s1, sup.s2],
        "nonsupport_exponent": sup.nonsupport_exponent,
        "weak_components": comps,
        "closure_iterations": ctx.iterations,
    }
    if args.format == "text":
        for key in ("satisfiable", "support_cells", "weak_components", "closure_iterations"):
            print(f"{key} {json.dumps(info[key])}")
    else:
        print(_dump(info))
    return EXIT_OK


def cmd_reduce(args) -> int:
    from .reductions import to_2dqbf_pair, to_uniform
    d = load_instance(args.input, args.input_format)
    if args.kind == "uniform":
        _write(args.output, serialize(to_uniform(d)))
        if args.output and args.output != "-":
            print(_dump({"schema": 1, "kind": "uniform", "output": args.output}))
        return EXIT_OK
    prefix = args.output or (str(Path(args.input).with_suffix("")) if args.input != "-" else "reduced")
    phi1, phi2 = to_2dqbf_pair(d)
    p1, p2 = f"{prefix}.phi1.dqcir", f"{prefix}.phi2.dqcir"
    Path(p1).write_text(serialize(phi1))
    Path(p2).write_text(serialize(phi2))
    manifest = {
        "schema": 1,
        "kind": "to-2dqbf",
        "source": args.input,
        "minuend": p1,
        "subtrahend": p2,
        "identity": "count(source) = count(minuend) - count(subtrahend)",
    }
    Path(f"{prefix}.manifest.json").write_text(_dump(manifest) + "\n")
    print(_dump({**manifest, "manifest": f"{prefix}.manifest.json"}))
    return EXIT_OK


def cmd_encode(args) -> int:
    from .reductions.fomc import fomc_encode, parse_fo
    if args.log_domain < 0:
        raise InputError("--log-domain must be non-negative")
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
    d = fomc_encode(parse_fo(text), args.log_domain)
    _write(args.output, serialize(d))
    return EXIT_OK


def cmd_generate(args) -> int:
    from .generators import GenSpec, generate
    if args.family in ("two-col", "ind-set"):
        if args.n < 1 or args.k < 0:
            raise InputError("need n >= 1 and k >= 0")
        spec = GenSpec(args.family.replace("-", "_"), n=args.n, k=args.k)
    else:
        widths = [args.w1, args.w2] + list(args.w or [])
        if any(w < 0 or w > args.n for w in widths):
            raise InputError("dependency widths must lie in [0, n]")
        spec = GenSpec("random", n=args.n, seed=args.seed, widths=tuple(widths),
                       gates=args.gates, guard=args.guard)
    _write(args.output, serialize(generate(spec)))
    return EXIT_OK


# parser


def _add_input(p, budgets: bool = True) -> None:
    p.add_argument("input", help="instance file ('-' for stdin)")
    p.add_argument("--input-format", choices=("auto", "circuit", "dqdimacs"), default="auto")
    if budgets:
        p.add_argument("--timeout", type=float, help="seconds")
        p.add_argument("--expansion-cells", type=int, dest="expansion_cells")
        p.add_argument("--expansion-clauses", type=int, dest="expansion_clauses")
        p.add_argument("--brute-cells", type=int, dest="brute_cells")
        p.add_argument("--max-nodes", type=int, dest="max_nodes")


def _add_counting(p) -> None:
    p.add_argument("--strategy", choices=STRATEGIES, default="auto")
    p.add_argument("--no-prune", action="store_true", help="disable pairwise pruning while enumerating")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for independent components")


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors (exit 1, JSON on stderr), not argparse's exit 2
    def error(self, message):
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dqcount", description="Exact model counting for DQBF.")
    ap.add_argument("--version", action="version", version=f"dqcount {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count Skolem-function models")
    _add_input(p)
    _add_counting(p)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--dump-bdd", metavar="PATH", help="write the closure diagram as DOT")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("compare", help="count with two methods and check they agree")
    _add_input(p)
    _add_counting(p)
    p.add_argument("--methods", default="symbolic,expansion", help="two comma-separated methods")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("expand", help="write the expansion as DIMACS")
    _add_input(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("info", help="satisfiability, support and component statistics")
    _add_input(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--dump-bdd", metavar="PATH")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("reduce", help="model-count preserving transformations")
    p.add_argument("kind", choices=("uniform", "to-2dqbf"))
    _add_input(p, budgets=False)
    p.add_argument("-o", "--output", help="output file (uniform) or path prefix (to-2dqbf)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("encode", help="encode other counting problems")
    p.add_argument("kind", choices=("fomc",))
    p.add_argument("input", help="sentence file ('-' for stdin)")
    p.add_argument("--log-domain", type=int, required=True, help="domain size is 2^n")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("generate", help="benchmark instances")
    p.add_argument("family", choices=("two-col", "ind-set", "random"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--w1", type=int, default=1)
    p.add_argument("--w2", type=int, default=1)
    p.add_argument("--w", type=int, action="append", help="widths of further existentials")
    p.add_argument("--gates", type=int, default=4)
    p.add_argument("--guard", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)
    return ap


def _alarm(signum, frame):
    raise DeadlineExceeded("timeout exceeded")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        _emit_error("usage", str(exc))
        return EXIT_INPUT
    timeout = getattr(args, "timeout", None)
    # the cooperative deadline is checked inside the counters; the alarm is
    # a backstop for long single operations
    use_alarm = timeout is not None and timeout > 0 and hasattr(signal, "setitimer")
    if use_alarm:
        old = signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, timeout * 1.2)
    try:
        return args.func(args)
    except (ParseError, InputError, NotTwoDqbf) as exc:
        extra = {}
        if isinstance(exc, ParseError) and exc.line:
            extra = {"line": exc.line, "column": exc.column}
        _emit_error("input", str(exc), **extra)
        return EXIT_INPUT
    except DeadlineExceeded as exc:
        _emit_error("timeout", str(exc))
        return EXIT_BUDGET
    except BudgetExceeded as exc:
        _emit_error("budget", str(exc))
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        _emit_error("input", str(exc))
        return EXIT_INPUT
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)
            signal.signal(signal.SIGALRM, old)


if __name__ == "__main__":
    sys.exit(main())
