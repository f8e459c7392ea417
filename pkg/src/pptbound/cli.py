"""Command line front end.

Three subcommands: ``bound`` minimizes relative entropy over the PPT cone
for a state file, ``kkt`` checks an optimality certificate for a state
pair, and ``experiment`` reproduces the scans and the non-additivity run
as CSV.  Exit codes: 0 success, 1 input error, 2 optimizer did not
converge, 3 certificate check failed.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import replace
from typing import Sequence

import numpy as np

from .entropy import fidelity
from .formulas import bell_z2_bound, isotropic_bound, nonadditivity_experiment
from .linalg import eig_hermitian
from .pptopt import OptimizerConfig, is_ppt, kkt_check, minimize_rel_entropy, tensor_square_pair
from .statespec import StateSpecError, load_state
from .states import bell_diagonal, isotropic

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2
EXIT_CERT_FAIL = 3

ISOTROPIC_SCAN_K = (2, 3)
ISOTROPIC_SCAN_F = (0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 1.0)
BELL_SCAN_STEPS = 8


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors by default; 2 is reserved
    # for optimizer non-convergence here, so usage errors become input errors.
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _config_from_args(args: argparse.Namespace) -> OptimizerConfig:
    cfg = OptimizerConfig()
    if args.tol is not None:
        cfg = replace(cfg, grad_map_tol=args.tol)
    if args.max_iters is not None:
        cfg = replace(cfg, max_iters=args.max_iters)
    return cfg


def cmd_bound(args: argparse.Namespace) -> int:
    state = load_state(args.state)
    result = minimize_rel_entropy(state, _config_from_args(args))
    p = args.precision
    d = state.dims
    print(f"state: {args.state} ({d.total}x{d.total}, dims {d.d_a}x{d.d_b})")
    print(f"bound_bits = {_fmt(result.bound_bits, p)}")
    print(
        f"converged = {_flag(result.converged)}  iterations = {result.iterations}"
        f"  grad_map_norm = {_fmt(result.final_grad_map_norm, p)}"
    )
    eigs = eig_hermitian(result.sigma_opt.matrix).eigenvalues
    print("sigma_opt eigenvalues: " + " ".join(_fmt(v, p) for v in eigs))
    if d.d_a == d.d_b:
        print(f"sigma_opt entanglement fidelity = {_fmt(fidelity(result.sigma_opt), p)}")
    if args.out is not None:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["state", "bound_bits", "converged", "iterations", "grad_map_norm"])
            writer.writerow(
                [
                    args.state,
                    _fmt(result.bound_bits, p),
                    _flag(result.converged),
                    result.iterations,
                    _fmt(result.final_grad_map_norm, p),
                ]
            )
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def cmd_kkt(args: argparse.Namespace) -> int:
    rho = load_state(args.rho)
    sigma = load_state(args.sigma)
    if rho.dims != sigma.dims:
        raise StateSpecError(
            f"dimension mismatch: rho is {rho.dims.d_a}x{rho.dims.d_b}, "
            f"sigma is {sigma.dims.d_a}x{sigma.dims.d_b}"
        )
    if args.tensor_square:
        rho, sigma = tensor_square_pair(rho, sigma)
    report = kkt_check(rho, sigma, tol=args.tol)
    p = args.precision
    print(f"complementarity residual = {_fmt(report.complementarity_residual, p)}")
    print(f"min eig K_Gamma = {_fmt(report.k_gamma_min_eig, p)}")
    print(f"tolerance = {_fmt(args.tol, p)}")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_CERT_FAIL


def _rows_nonadditivity(precision: int) -> tuple[list[str], list[list[str]]]:
    rep = nonadditivity_experiment()
    header = [
        "b1_bits",
        "b2_bits",
        "gap_bits",
        "kkt_single_passed",
        "kkt_double_passed",
        "converged",
    ]
    row = [
        _fmt(rep.b1_bits, precision),
        _fmt(rep.b2_bits, precision),
        _fmt(rep.gap_bits, precision),
        _flag(rep.kkt_single.passed),
        _flag(rep.kkt_double.passed),
        _flag(rep.optimizer.converged),
    ]
    print(f"gap_bits = {_fmt(rep.gap_bits, precision)}")
    return header, [row]


def _rows_isotropic_scan(precision: int) -> tuple[list[str], list[list[str]]]:
    header = ["k", "f", "closed_form_bits", "optimizer_bits", "abs_diff", "converged"]
    rows = []
    for k in ISOTROPIC_SCAN_K:
        for f in ISOTROPIC_SCAN_F:
            closed = isotropic_bound(k, f).bound_bits
            result = minimize_rel_entropy(isotropic(k, f))
            rows.append(
                [
                    str(k),
                    _fmt(f, precision),
                    _fmt(closed, precision),
                    _fmt(result.bound_bits, precision),
                    _fmt(abs(result.bound_bits - closed), precision),
                    _flag(result.converged),
                ]
            )
    return header, rows


def _rows_bell_scan(precision: int) -> tuple[list[str], list[list[str]]]:
    header = ["p1", "p2", "p3", "p4", "max_p", "is_ppt", "bound_bits"]
    rows = []
    n = BELL_SCAN_STEPS
    for i in range(n + 1):
        for j in range(n + 1 - i):
            for k in range(n + 1 - i - j):
                p = np.array([i, j, k, n - i - j - k], dtype=float) / n
                ppt = is_ppt(bell_diagonal(p))
                bound = bell_z2_bound(p).bound_bits
                rows.append(
                    [
                        *(_fmt(x, precision) for x in p),
                        _fmt(float(p.max()), precision),
                        _flag(bool(ppt)),
                        _fmt(bound, precision),
                    ]
                )
    return header, rows


def cmd_experiment(args: argparse.Namespace) -> int:
    builders = {
        "nonadditivity": _rows_nonadditivity,
        "isotropic_scan": _rows_isotropic_scan,
        "bell_scan": _rows_bell_scan,
    }
    builder = builders.get(args.name)
    if builder is None:
        raise StateSpecError(
            f"unknown experiment {args.name!r}; expected one of {', '.join(sorted(builders))}"
        )
    header, rows = builder(args.precision)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    print(f"wrote {len(rows)} row(s) to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pptbound", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_bound = sub.add_parser("bound", help="minimize relative entropy over PPT states")
    p_bound.add_argument("--state", required=True, help="state file (JSON)")
    p_bound.add_argument("--tol", type=float, default=None, help="gradient-map stopping tolerance")
    p_bound.add_argument("--max-iters", type=int, default=None, help="iteration cap")
    p_bound.add_argument("--out", default=None, help="optional CSV output path")
    p_bound.add_argument("--precision", type=int, default=9, help="significant digits in output")
    p_bound.set_defaults(func=cmd_bound)

    p_kkt = sub.add_parser("kkt", help="check an optimality certificate for a state pair")
    p_kkt.add_argument("--rho", required=True, help="state file for the argument state")
    p_kkt.add_argument("--sigma", required=True, help="state file for the candidate optimum")
    p_kkt.add_argument("--tol", type=float, default=1e-8, help="certificate tolerance")
    p_kkt.add_argument(
        "--tensor-square",
        action="store_true",
        help="check the pair (rho x rho, sigma x sigma) instead",
    )
    p_kkt.add_argument("--precision", type=int, default=9, help="significant digits in output")
    p_kkt.set_defaults(func=cmd_kkt)

    p_exp = sub.add_parser("experiment", help="write a named experiment as CSV")
    p_exp.add_argument("name", help="nonadditivity | isotropic_scan | bell_scan")
    p_exp.add_argument("--out", required=True, help="CSV output path")
    p_exp.add_argument("--precision", type=int, default=9, help="significant digits in output")
    p_exp.set_defaults(func=cmd_experiment)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateSpecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
