"""Command-line front end. Every subcommand prints machine-readable output
and follows one exit-code contract: 0 success, 1 domain/runtime error from
the library, 2 usage error (argparse)."""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

import gmpy2

from .bench import fit_growth, report_to_csv, report_to_json, run_benchmark
from .closed_form import build_closed_form, evaluate, render
from .coefficients import CoeffTable
from .debye import DebyeParams, memory_transform, memory_transform_via_closed_form
from .errors import (
    BenchmarkAgreementError,
    DomainError,
    InsufficientDataError,
    OracleConsistencyError,
    QuadratureConvergenceError,
    UnsupportedOrderError,
)
from .exact import rational_to_string
from .oracles import LEGENDRE_MAX_ORDER, legendre_q_oracle, quadrature_transform

VALIDATE_TOL_QUADRATURE = 1e-8
VALIDATE_TOL_LEGENDRE = 1e-9


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {value}")
    return value


def _reps(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 5:
        raise argparse.ArgumentTypeError(f"must be at least 5, got {value}")
    return value


def _bits(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 24:
        raise argparse.ArgumentTypeError(f"must be at least 24, got {value}")
    return value


def _pos_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not (value > 0.0) or math.isinf(value) or math.isnan(value):
        raise argparse.ArgumentTypeError(f"must be a finite positive number, got {text!r}")
    return value


def _pos_real_text(text: str) -> str:
    # validated but passed through as text, so the evaluator parses the
    # decimal at working precision instead of inheriting float rounding
    _pos_float(text)
    return text.strip()


def _pos_float_list(text: str) -> list:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers")
    return [_pos_float(piece) for piece in items]


def _nonneg_int_list(text: str) -> list:
    items = [piece for piece in text.split(",") if piece.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of integers")
    return [_nonneg_int(piece) for piece in items]


def _sci_string(x: gmpy2.mpfr, ndigits: int) -> str:
    # mpfr.digits returns (mantissa, exp) with value = 0.mantissa * 10^exp
    mant, exp, _ = x.digits(10, ndigits)
    sign = "-" if mant.startswith("-") else ""
    mant = mant.lstrip("-")
    head = mant[0] + ("." + mant[1:] if len(mant) > 1 else "")
    return f"{sign}{head}e{exp - 1}"


def _shortest_decimal(x: gmpy2.mpfr) -> str:
    """Shortest scientific-notation string that parses back to x exactly
    at its own precision."""
    bits = x.precision
    if gmpy2.is_zero(x):
        return "0"
    limit = int(math.ceil(bits * 0.30103)) + 3
    # mpfr.digits rejects a 1-digit request, so the search starts at 2
    for digits in range(2, limit + 1):
        s = _sci_string(x, digits)
        if gmpy2.mpfr(s, precision=bits) == x:
            return s
    return _sci_string(x, limit)


def _cmd_coeffs(args) -> int:
    table = CoeffTable.build(args.l)
    payload = {
        "l": args.l,
        "coeffs": [rational_to_string(c) for c in table.row(args.l)],
    }
    print(json.dumps(payload, separators=(",", ":")))
    return 0


def _cmd_closed_form(args) -> int:
    table = CoeffTable.build(args.l)
    cf = build_closed_form(args.l, table)
    print(render(cf, args.format))
    return 0


def _cmd_eval(args) -> int:
    table = CoeffTable.build(args.l)
    cf = build_closed_form(args.l, table)
    result = evaluate(cf, args.p, args.bits)
    payload = {
        "l": args.l,
        "p": args.p,
        "bits": args.bits,
        "value": _shortest_decimal(result.value),
        "precision_used_bits": result.precision_used_bits,
        "estimated_cancellation_bits": result.estimated_cancellation_bits,
    }
    print(json.dumps(payload, separators=(",", ":")))
    return 0


def _cmd_validate(args) -> int:
    table = CoeffTable.build(args.l_max)
    entries = []
    all_ok = True
    for l in range(args.l_max + 1):
        cf = build_closed_form(l, table)
        for p in args.p_grid:
            value = float(evaluate(cf, p, 64).value)
            oracle = quadrature_transform(l, p)
            quad_residual = abs(value - oracle.value)
            ok = quad_residual <= VALIDATE_TOL_QUADRATURE
            entry = {
                "l": l,
                "p": p,
                "value": value,
                "quadrature": oracle.value,
                "quad_residual": quad_residual,
            }
            if l <= LEGENDRE_MAX_ORDER:
                leg = legendre_q_oracle(l, p)
                leg_residual = abs(value - leg)
                ok = ok and leg_residual <= VALIDATE_TOL_LEGENDRE
                entry["legendre"] = leg
                entry["legendre_residual"] = leg_residual
            else:
                entry["legendre"] = None
                entry["legendre_residual"] = None
            entry["ok"] = ok
            entries.append(entry)
            all_ok = all_ok and ok
    payload = {
        "tolerance_quadrature": VALIDATE_TOL_QUADRATURE,
        "tolerance_legendre": VALIDATE_TOL_LEGENDRE,
        "entries": entries,
        "all_ok": all_ok,
    }
    print(json.dumps(payload, separators=(",", ":")))
    return 0 if all_ok else 1


def _cmd_debye(args) -> int:
    params = DebyeParams(m=args.m, length=args.len, v=args.v, omega_l=args.omega_l)
    table = CoeffTable.build(2)
    cf0 = build_closed_form(0, table)
    cf2 = build_closed_form(2, table)
    direct = memory_transform(args.p, params)
    routed = memory_transform_via_closed_form(args.p, params, cf0, cf2)
    payload = {
        "p": args.p,
        "m": args.m,
        "len": args.len,
        "v": args.v,
        "omega_l": args.omega_l,
        "direct": direct,
        "via_closed_form": routed,
        "difference": abs(direct - routed),
    }
    print(json.dumps(payload, separators=(",", ":")))
    return 0


def _cmd_bench(args) -> int:
    report = run_benchmark(args.l_list, args.p_list, reps=args.reps)
    if args.format == "csv":
        sys.stdout.write(report_to_csv(report))
        return 0
    print(report_to_json(report))
    if args.fit:
        fit = fit_growth(report)
        print(json.dumps({"b": fit.b, "residual": fit.residual}, separators=(",", ":")))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphlaplace",
        description=(
            "Exact closed-form Laplace transforms of spherical Bessel functions, "
            "with numerical cross-checks"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_coeffs = sub.add_parser("coeffs", help="one row of the expansion coefficient table")
    p_coeffs.add_argument("--l", type=_nonneg_int, required=True, help="order l >= 0")
    p_coeffs.set_defaults(handler=_cmd_coeffs)

    p_cf = sub.add_parser("closed-form", help="exact transform of j_l, rendered")
    p_cf.add_argument("--l", type=_nonneg_int, required=True, help="order l >= 0")
    p_cf.add_argument(
        "--format", choices=("json", "plain", "latex"), default="json",
        help="output format (default json)",
    )
    p_cf.set_defaults(handler=_cmd_closed_form)

    p_eval = sub.add_parser("eval", help="evaluate the transform at one point")
    p_eval.add_argument("--l", type=_nonneg_int, required=True, help="order l >= 0")
    p_eval.add_argument("--p", type=_pos_real_text, required=True, help="argument p > 0")
    p_eval.add_argument(
        "--bits", type=_bits, default=64,
        help="output precision in significand bits (default 64, minimum 24)",
    )
    p_eval.set_defaults(handler=_cmd_eval)

    p_val = sub.add_parser("validate", help="closed form against both oracles on a grid")
    p_val.add_argument("--l-max", type=_nonneg_int, required=True, help="check l = 0..l_max")
    p_val.add_argument(
        "--p-grid", type=_pos_float_list, required=True,
        help="comma-separated p values, each > 0",
    )
    p_val.set_defaults(handler=_cmd_validate)

    p_debye = sub.add_parser("debye", help="Debye memory-kernel transform, both routes")
    p_debye.add_argument("--m", type=_pos_float, required=True, help="bath oscillator mass")
    p_debye.add_argument("--len", type=_pos_float, required=True, help="line length")
    p_debye.add_argument("--v", type=_pos_float, required=True, help="sound velocity")
    p_debye.add_argument("--omega-l", type=_pos_float, required=True, help="cutoff frequency")
    p_debye.add_argument("--p", type=_pos_float, required=True, help="argument p > 0")
    p_debye.set_defaults(handler=_cmd_debye)

    p_bench = sub.add_parser("bench", help="time closed form against quadrature")
    p_bench.add_argument(
        "--l-list", type=_nonneg_int_list, required=True,
        help="comma-separated orders",
    )
    p_bench.add_argument(
        "--p-list", type=_pos_float_list, required=True,
        help="comma-separated p values, each > 0",
    )
    p_bench.add_argument("--reps", type=_reps, default=9, help="repetitions (default 9, min 5)")
    p_bench.add_argument(
        "--format", choices=("json", "csv"), default="json",
        help="output format (default json)",
    )
    p_bench.add_argument(
        "--fit", action="store_true",
        help="also print the fitted speedup growth exponent (json format only)",
    )
    p_bench.set_defaults(handler=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except (
        DomainError,
        UnsupportedOrderError,
        OracleConsistencyError,
        QuadratureConvergenceError,
        BenchmarkAgreementError,
        InsufficientDataError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
