"""``lierf`` command-line entry point.

    lierf <suite> [--config PATH] [--seed N] [--grid N] [--lambda X]
                  [--c-phase THETA] [--kernel shipped|broken|PATH]
                  [--format text|csv|json] [--out PATH]
    lierf eval "<expression>" [--normal-order] [--format text|json]

Exit status: 0 when every check passes, 1 on a failed check, 2 on a usage,
parse or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from ..algebra import Coefficient, OpPoly, dumps, normal_order
from ..kernels.grid import GridMismatchError
from ..kernels.io import KernelFileError
from .config import FORMATS, ConfigError, load_config
from .parser import ParseError, evaluate, parse_expr, to_text, value_to_text
from .report import emit_table, write_output
from .suites import SUITES, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _suite_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lierf", description="Run a verification suite.")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--seed", type=int)
    p.add_argument("--grid", type=int, metavar="N", help="points per axis")
    p.add_argument("--lambda", dest="lam", type=float, metavar="X", help="real coupling")
    p.add_argument("--c-phase", dest="c_phase", type=float, metavar="THETA",
                   help="kernel phase c = exp(i THETA)")
    p.add_argument("--kernel", help="shipped, broken, or a kernel JSON file")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out", metavar="PATH")
    return p


def _eval_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lierf eval", description="Evaluate an expression exactly.")
    p.add_argument("expression")
    p.add_argument("--normal-order", action="store_true", help="normal-order operator results")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _run_eval(argv) -> int:
    args = _eval_parser().parse_args(argv)
    try:
        node = parse_expr(args.expression)
        value = evaluate(node)
    except (ParseError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if isinstance(value, OpPoly) and args.normal_order:
        value = normal_order(value)
    if args.format == "json":
        payload = {"input": to_text(node),
                   "kind": type(value).__name__,
                   "value": json.loads(dumps(value)) if isinstance(value, (OpPoly, Coefficient)) else str(value)}
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stdout.write(value_to_text(value) + "\n")
    return EXIT_PASS


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "eval":
        try:
            return _run_eval(argv[1:])
        except SystemExit as exc:
            return int(exc.code or 0) and EXIT_USAGE
    try:
        args = _suite_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        cfg = load_config(args.config, {"seed": args.seed, "n": args.grid, "lam": args.lam,
                                        "c_phase": args.c_phase, "kernel": args.kernel,
                                        "format": args.format, "out": args.out})
        report = run_suite(args.suite, cfg)
        text = emit_table(report, cfg.format)
        write_output(text, cfg.out)
    except (ConfigError, KernelFileError, GridMismatchError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    return EXIT_PASS if report["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
