"""Command-line front end: converge, analyze, and solve workflows.

Exit codes: 0 success, 2 usage error (argparse's own convention),
3 numerical instability.  c values are accepted as fractions ("-1/4",
"4/13") so the error-inhibiting points survive without decimal
truncation; identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from ._stencils import FOURTH_BLOCK, SECOND_BLOCK
from .convergence import run_study, symbol_table
from .grid import ibvp_grid, periodic_grid
from .manufactured import problem_by_name, project
from .operators import PERIODIC, SchemeSpec, build_operator
from .symbols import (SPLIT_PERIODIC_HALF, assemble_modal_basis,
                      eigvec_coefficients, interior_symbols)
from .timestep import (IntegrationBlowupError, StepPolicy, integrate,
                       RK4_REAL_AXIS_LIMIT)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSTABLE = 3

DEFAULT_C_SWEEP = {SECOND_BLOCK: "0,-1/4,1/6,-1/6",
                   FOURTH_BLOCK: "0,4/13,1/6,-1/6"}


def _parse_c(token: str) -> float:
    try:
        return float(Fraction(token.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad c value {token!r}") from None


def _parse_c_list(text: str) -> list[float]:
    return [_parse_c(tok) for tok in text.split(",") if tok.strip()]


def _parse_n_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N list {text!r}") from None


def _complex_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockfd",
        description="Two-point-block finite-difference lab for the 1-D "
                    "heat equation",
        epilog="c values accept fractions; use the --c=-1/4 form for "
               "values starting with a minus sign.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scheme_args(p, with_bc=True):
        p.add_argument("--scheme", required=True,
                       choices=[SECOND_BLOCK, FOURTH_BLOCK],
                       help="interior block stencil")
        if with_bc:
            p.add_argument("--bc", required=True,
                           choices=["periodic", "dirichlet", "neumann"],
                           help="boundary condition")
        p.add_argument("--t-end", type=float, default=1.0,
                       help="final time (default 1.0, as in the standard "
                            "experiments)")
        p.add_argument("--kappa", type=float, default=None,
                       help="step-size safety factor in dt = kappa*s^2 "
                            "(default 0.1 second-block, 0.05 fourth-block)")

    conv = sub.add_parser(
        "converge",
        help="run a convergence study and write the error/order table")
    add_scheme_args(conv)
    conv.add_argument("--c", type=_parse_c_list, default=None,
                      help="comma list of c values; fractions allowed "
                           "(default reproduces the standard four-curve runs)")
    conv.add_argument("--n", type=_parse_n_list, default=[32, 64, 128],
                      help="comma list of block counts (default 32,64,128)")
    conv.add_argument("--problem", default=None,
                      help="manufactured problem (exp-cos-periodic, "
                           "exp-cos-ibvp, poly:a0,a1,...); default matches "
                           "the bc")
    conv.add_argument("--out", default="convergence",
                      help="output path stem or file (default 'convergence')")
    conv.add_argument("--format", choices=["csv", "json"], default="csv")

    ana = sub.add_parser(
        "analyze",
        help="emit symbols, eigenvector norms and stability verdicts")
    ana.add_argument("--n", type=int, required=True, help="block count N")
    ana.add_argument("--c", type=_parse_c, required=True, help="parameter c")
    ana.add_argument("--table", action="store_true",
                     help="include the per-frequency Dirichlet/Neumann "
                          "symbol table of the quarter grid")
    ana.add_argument("--out", default=None,
                     help="write the JSON here instead of stdout")

    sol = sub.add_parser(
        "solve", help="single integration; writes grid, solution, exact, "
                      "error as CSV")
    add_scheme_args(sol)
    sol.add_argument("--c", type=_parse_c, required=True)
    sol.add_argument("--n", type=int, required=True)
    sol.add_argument("--problem", default=None)
    sol.add_argument("--out", default="solution.csv")
    return parser


def _default_problem(bc: str) -> str:
    return "exp-cos-periodic" if bc == PERIODIC else "exp-cos-ibvp"


def cmd_converge(args) -> int:
    c_values = args.c if args.c is not None \
        else _parse_c_list(DEFAULT_C_SWEEP[args.scheme])
    problem_name = args.problem or _default_problem(args.bc)
    try:
        problem = problem_by_name(problem_name)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    policy = StepPolicy(kappa=args.kappa)
    try:
        report = run_study(args.scheme, args.bc, c_values, args.n,
                           problem, t_end=args.t_end, policy=policy)
    except IntegrationBlowupError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE

    out = args.out
    if "." not in out.rsplit("/", 1)[-1]:
        out = f"{out}.{args.format}"
    payload = report.to_csv() if args.format == "csv" else report.to_json()
    with open(out, "w") as fh:
        fh.write(payload)

    print(f"# problem={report.problem} t_end={report.t_end} "
          f"kappa={report.kappa}")
    print(f"{'c':>12} {'N':>6} {'s':>12} {'error':>14} {'order':>8}")
    for r in report.rows:
        order = "" if r.observed_order is None else f"{r.observed_order:.3f}"
        print(f"{r.c:>12.6g} {r.N:>6d} {r.s:>12.6g} {r.error:>14.6e} "
              f"{order:>8}")
    for c, slope in report.fitted_orders.items():
        print(f"# fitted order c={c:g}: {slope:.3f}")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    N, c = args.n, args.c
    if N < 2 or N % 2:
        print(f"error: N must be even and >= 2, got {N}", file=sys.stderr)
        return EXIT_USAGE
    h = 2 * np.pi / (N + 1)
    s = h / 2
    basis = assemble_modal_basis(N, h, c, SPLIT_PERIODIC_HALF)
    spec = SchemeSpec(SECOND_BLOCK, PERIODIC, c)

    records = []
    for omega in range(0, N // 2 + 1):
        if omega == 0:
            q1, q2 = interior_symbols(0, h, c)
            rec = {"omega": 0, "q1": _complex_pair(q1),
                   "q2": _complex_pair(q2), "det": 1.0, "omega_h": 0.0}
        else:
            r = eigvec_coefficients(omega, h, c, SPLIT_PERIODIC_HALF, N=N)
            rec = {
                "omega": omega,
                "q1": _complex_pair(r.q1), "q2": _complex_pair(r.q2),
                "r1": _complex_pair(r.r1), "r2": _complex_pair(r.r2),
                "alpha1": _complex_pair(r.alpha1),
                "beta1": _complex_pair(r.beta1),
                "alpha2": _complex_pair(r.alpha2),
                "beta2": _complex_pair(r.beta2),
                "delta": _complex_pair(r.delta),
                "det": abs(r.det),
                "omega_h": omega * h,
            }
        records.append(rec)

    qs = np.array([rec["q1"] for rec in records]
                  + [rec["q2"] for rec in records])
    stable = bool(np.all(np.abs(qs[:, 1]) <= 1e-9)
                  and np.all(qs[:, 0] <= 1e-9)) and c < 0.5
    payload = {
        "N": N, "c": c, "h": h, "s": s,
        "symbols": records,
        "psi_norm": basis.norm_psi,
        "psi_norm_bound": float(np.sqrt(2)),
        "psi_inverse_norm": basis.norm_psi_inverse,
        "psi_inverse_bound": float(10 * np.sqrt(2) / 9 * np.sqrt(s)),
        "det_min": basis.det_min,
        "verdict": "stable" if stable else "unstable",
        "advisories": list(spec.advisories),
    }
    if args.table:
        payload["table"] = symbol_table(N, c).to_dict()

    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    problem_name = args.problem or _default_problem(args.bc)
    try:
        problem = problem_by_name(problem_name)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.n < 2 or args.n % 2:
        print(f"error: N must be even and >= 2, got {args.n}",
              file=sys.stderr)
        return EXIT_USAGE
    make_grid = periodic_grid if args.bc == PERIODIC else ibvp_grid
    grid = make_grid(args.n, 1.0)
    op = build_operator(grid, SchemeSpec(args.scheme, args.bc, args.c))
    policy = StepPolicy(kappa=args.kappa)
    try:
        state = integrate(op, problem, args.t_end, policy)
    except IntegrationBlowupError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    exact = project(problem, grid, args.t_end)
    with open(args.out, "w") as fh:
        fh.write("x,numerical,exact,error\n")
        for x, v, u in zip(grid.points, state, exact):
            fh.write(f"{x!r},{v:.16e},{u:.16e},{v - u:.16e}\n")
    err = float(np.abs(state - exact).max())
    print(f"max pointwise error {err:.6e}; wrote {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "converge":
        return cmd_converge(args)
    if args.command == "analyze":
        return cmd_analyze(args)
    return cmd_solve(args)


if __name__ == "__main__":
    sys.exit(main())
