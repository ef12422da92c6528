"""Command-line front end.

Exit codes: 0 success / all checks passed, 1 verification failure, 2 parse or
shape errors, 3 verified no-solution, 4 internal failure.
"""

import argparse
import json
import sys

import numpy as np

from . import io
from .driver import solve, verify_inflated, verify_solution
from .oracle import brute_force_solutions
from .operators import kronecker_determinants
from .problem import (
    InternalSolveError,
    PencilProblem,
    SolverConfig,
    UnsupportedShapeError,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_PARSE = 2
EXIT_NO_SOLUTION = 3
EXIT_INTERNAL = 4


def _fail_parse(msg):
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_PARSE


def _load(path):
    try:
        return io.load_problem(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read problem file {path}: {exc}") from exc


def _config_from_args(args):
    return SolverConfig(
        rank_tol=args.tol,
        residual_tol=args.residual_tol,
        seed=args.seed,
        trials=args.trials,
        cond_threshold=args.cond_threshold,
    )


def _emit_report(report, output):
    if output:
        io.save_report(output, report)
    else:
        io.save_report(sys.stdout, report)


def cmd_solve(args):
    try:
        a0, a1, a2, _ = _load(args.input)
        config = _config_from_args(args)
    except ValueError as exc:
        return _fail_parse(exc)
    try:
        report = solve(a0, a1, a2, config)
    except UnsupportedShapeError as exc:
        return _fail_parse(exc)
    except InternalSolveError as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit_report(report, args.output)
    if not report.solutions:
        print("no solution (certified by the deflated system)", file=sys.stderr)
        return EXIT_NO_SOLUTION
    return EXIT_OK


def _format_entry(v):
    if abs(v.imag) == 0.0 and float(v.real).is_integer():
        return str(int(v.real))
    if abs(v.imag) == 0.0:
        return f"{v.real:.17g}"
    return f"({v.real:.17g},{v.imag:.17g})"


def cmd_gamma(args):
    try:
        a0, a1, a2, _ = _load(args.input)
        problem = PencilProblem(a0, a1, a2)
    except ValueError as exc:
        return _fail_parse(exc)
    dets = kronecker_determinants(problem, scaling=args.scaling)
    for idx, g in enumerate(dets.gammas):
        rows, cols = g.shape
        print(f"Gamma{idx} ({rows}x{cols}, {args.scaling}):")
        for r in range(rows):
            print(" ".join(_format_entry(v) for v in g[r]))
        print()
    return EXIT_OK


def cmd_verify(args):
    try:
        a0, a1, a2, _ = _load(args.input)
        report = io.load_report(args.solutions)
    except (OSError, ValueError, json.JSONDecodeError, KeyError) as exc:
        return _fail_parse(f"cannot read inputs: {exc}")
    n = a0.shape[1]
    for sol in report.solutions:
        if sol.x.size != n:
            return _fail_parse(
                f"solution eigenvector length {sol.x.size} does not match n={n}"
            )
    all_ok = True
    print("idx  residual      sigma_min/scale  inflated  status")
    for idx, sol in enumerate(report.solutions):
        rep = verify_solution((a0, a1, a2), sol.lam, sol.x, args.tol)
        infl = verify_inflated((a0, a1, a2), sol.lam, sol.x, args.tol)
        infl_ok = all(r["passed"] for r in infl.values())
        ok = rep["passed"] and infl_ok
        all_ok = all_ok and ok
        print(
            f"{idx:<4d} {rep['residual']:<13.3e} {rep['sigma_min_ratio']:<16.3e} "
            f"{'pass' if infl_ok else 'FAIL':<9s} {'pass' if ok else 'FAIL'}"
        )
    return EXIT_OK if all_ok else EXIT_VERIFY_FAIL


def cmd_oracle(args):
    try:
        a0, a1, a2, _ = _load(args.input)
    except ValueError as exc:
        return _fail_parse(exc)
    m, n = a0.shape
    if n > 4 or m > 6:
        return _fail_parse(f"oracle is limited to n <= 4 and m <= 6, got {m}x{n}")
    report = brute_force_solutions(
        a0,
        a1,
        a2,
        tol=args.tol,
        grid=args.grid,
        refine_iters=args.refine_iters,
        seed=args.seed,
    )
    _emit_report(report, args.output)
    return EXIT_OK if report.solutions else EXIT_NO_SOLUTION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kronpencil",
        description="Solve two-parameter rectangular matrix pencil problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the full solver on a problem file")
    p_solve.add_argument("input")
    p_solve.add_argument("--tol", type=float, default=1e-8, help="rank tolerance")
    p_solve.add_argument("--residual-tol", dest="residual_tol", type=float, default=1e-8)
    p_solve.add_argument("--seed", type=int, default=1729)
    p_solve.add_argument("--trials", type=int, default=64)
    p_solve.add_argument("--cond-threshold", dest="cond_threshold", type=float, default=1e10)
    p_solve.add_argument("--output", default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_gamma = sub.add_parser("gamma", help="print the three deflated determinant matrices")
    p_gamma.add_argument("input")
    p_gamma.add_argument("--scaling", choices=("integer", "orthogonal"), default="integer")
    p_gamma.set_defaults(func=cmd_gamma)

    p_verify = sub.add_parser("verify", help="check a solution file against a problem file")
    p_verify.add_argument("input")
    p_verify.add_argument("solutions")
    p_verify.add_argument("--tol", type=float, default=1e-8)
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="brute-force reference solver (small problems)")
    p_oracle.add_argument("input")
    p_oracle.add_argument("--tol", type=float, default=1e-8)
    p_oracle.add_argument("--grid", type=int, default=9, help="grid points per real axis")
    p_oracle.add_argument("--refine-iters", dest="refine_iters", type=int, default=30)
    p_oracle.add_argument("--seed", type=int, default=7)
    p_oracle.add_argument("--output", default=None)
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    np.seterr(all="ignore")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
