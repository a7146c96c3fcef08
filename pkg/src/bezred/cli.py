"""``bezred`` command line: reduce a curve file, or compare two curve files.

Exit codes: 0 success, 2 invalid input or violated assumption, 3 file
system failure, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import sys
import time
import warnings

import numpy as np

from . import __version__
from .bernstein import WEIGHT_PRESETS, JacobiWeight
from .continuity import ContinuitySpec
from .errors import BezredError, DomainError, NumericalError, UnsupportedPlotError
from .io import load_curve, save_curve, to_json
from .reduction import ReductionProblem, max_error, reduce, squared_error
from .svg import emit_svg

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_NUMERICAL = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def _add_weight_args(p):
    p.add_argument("--alpha", type=float, help="Jacobi exponent of (1-t) (default 0)")
    p.add_argument("--beta", type=float, help="Jacobi exponent of t (default 0)")
    p.add_argument("--weight", choices=sorted(WEIGHT_PRESETS),
                   help="named (alpha, beta) pair; excludes --alpha/--beta")
    p.add_argument("--grid", type=int, default=500, help="E-infinity sampling grid size N (default 500)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bezred", description="Constrained degree reduction of Bezier curves.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    red = sub.add_parser("reduce", help="reduce a curve to a lower degree")
    red.add_argument("--input", required=True, help="curve file (JSON)")
    red.add_argument("--degree", "-m", type=int, required=True, help="target degree m")
    red.add_argument("--mode", choices=("c", "cg", "g"), default="g",
                     help="c: parametric, cg: hybrid, g: geometric continuity (default g)")
    red.add_argument("-k", type=int, default=-1, help="continuity order at t=0 (-1..3)")
    red.add_argument("-l", type=int, default=-1, help="continuity order at t=1 (-1..3)")
    red.add_argument("--p-fixed", action="store_true", help="pin lambda_1 = 1 (needs k >= 2)")
    red.add_argument("--q-fixed", action="store_true", help="pin mu_1 = 1 (needs l >= 2)")
    _add_weight_args(red)
    red.add_argument("--d0", type=float, default=1e-4, help="lower bound on lambda_1")
    red.add_argument("--d1", type=float, default=1e-4, help="lower bound on mu_1")
    red.add_argument("--output", "-o", help="write the reduced curve here")
    red.add_argument("--svg", help="write a comparison plot here (planar curves only)")

    ver = sub.add_parser("verify", help="recompute e2 and einf between two curve files")
    ver.add_argument("--input", required=True)
    ver.add_argument("--against", required=True)
    _add_weight_args(ver)
    return parser


def _weight(args) -> JacobiWeight:
    if args.weight is not None:
        if args.alpha is not None or args.beta is not None:
            raise DomainError("--weight cannot be combined with --alpha/--beta")
        return JacobiWeight.preset(args.weight)
    return JacobiWeight(args.alpha if args.alpha is not None else 0.0,
                        args.beta if args.beta is not None else 0.0)


def _check_grid(n):
    if n < 1:
        raise DomainError(f"--grid must be >= 1, got {n}")


def _plain(obj):
    """Diagnostics as JSON-friendly builtins (sorted keys for stable output)."""
    if isinstance(obj, dict):
        return {str(k): _plain(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return str(obj)


def _parametric_order(mode, order, pinned):
    """Order of plain C-continuity guaranteed at one end."""
    if mode == "c" or order < 1:
        return order
    return 1 if pinned else 0


def run_reduce(args, out=None) -> dict:
    out = out or sys.stdout
    t_start = time.perf_counter()
    weight = _weight(args)
    _check_grid(args.grid)
    spec = ContinuitySpec(args.k, args.l, args.p_fixed, args.q_fixed, args.d0, args.d1)
    source = load_curve(args.input)
    problem = ReductionProblem(source, args.degree, spec, weight)
    if args.mode == "cg":
        problem = problem.hybrid()
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = reduce(problem, args.mode)
    notes = []
    for w in caught:
        notes.append(f"{w.category.__name__}: {w.message}")
        print(f"warning: {w.message}", file=sys.stderr)

    diag = dict(result.diagnostics)
    timings = diag.pop("timings", {})
    einf = result.einf if args.grid == 500 else max_error(source, result.reduced, args.grid)
    if args.output:
        save_curve(result.reduced, args.output)
    plot = None
    if args.svg:
        try:
            emit_svg(source, result.reduced, args.svg)
            plot = args.svg
        except UnsupportedPlotError as exc:
            notes.append(f"svg skipped: {exc}")
            print(f"warning: svg skipped: {exc}", file=sys.stderr)
    timings = dict(timings, total=time.perf_counter() - t_start)
    spec = problem.spec
    report = {
        "mode": args.mode,
        "n": source.degree,
        "m": problem.m,
        "k": spec.k,
        "l": spec.l,
        "p": _parametric_order(args.mode, spec.k, spec.p_fixed),
        "q": _parametric_order(args.mode, spec.l, spec.q_fixed),
        "alpha": weight.alpha,
        "beta": weight.beta,
        "d0": spec.d0,
        "d1": spec.d1,
        "grid": args.grid,
        "e2": result.e2,
        "einf": einf,
        "params": {"lambda": list(result.params.lambdas), "mu": list(result.params.mus)},
        "diagnostics": _plain(diag),
        "warnings": notes,
        "output": args.output,
        "svg": plot,
        "timings": _plain(timings),
    }
    out.write(to_json(report, indent=2) + "\n")
    return report


def run_verify(args, out=None) -> dict:
    out = out or sys.stdout
    weight = _weight(args)
    _check_grid(args.grid)
    A = load_curve(args.input)
    B = load_curve(args.against)
    report = {
        "input": args.input,
        "against": args.against,
        "alpha": weight.alpha,
        "beta": weight.beta,
        "grid": args.grid,
        "e2": float(np.sqrt(squared_error(A, B, weight))),
        "einf": max_error(A, B, args.grid),
    }
    out.write(to_json(report, indent=2) + "\n")
    return report


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    handler = run_reduce if args.command == "reduce" else run_verify
    try:
        handler(args)
    except DomainError as exc:
        print(f"bezred: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"bezred: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as exc:
        print(f"bezred: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BezredError as exc:
        print(f"bezred: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
