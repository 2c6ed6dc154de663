"""Command-line front end.

Every command prints one JSON record (sorted keys, floats to 17 significant
digits) except `roots --format csv`. Exit codes: 0 success, 1 a check or
verification failed, 2 bad usage or an input outside an operation's domain.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from enum import Enum
from fractions import Fraction

import numpy as np

from . import __version__, sequences
from .charpoly import ROOTS_TOL, CharPolynomial, Family, all_roots, root_count_report
from .errors import BoundaryWarning, FibSpecError, NoInteriorMinimum
from .invasion import InvasionModel, Kernel, minimize_speed
from .operators import Kind, OperatorSpec, exact_power_norm
from .spectra import ROOT_TOL, classify
from .verify import SUITES
from .verify import run as run_suites

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

COMPLEX_HELP = (
    "complex number written a, a+bi, a-bi or bi (j also accepted); "
    "use --lambda=-1-2i when the value starts with a minus sign"
)


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "").lower()
    if s.endswith("i"):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return z


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return value


# -- deterministic JSON ---------------------------------------------------------


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    return format(x, ".17g")


def _escape(s: str) -> str:
    return json.dumps(s)


def dumps(obj) -> str:
    """JSON with sorted keys and every float written with 17 significant digits."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, Enum):
        return dumps(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating, Fraction)):
        return _fmt_float(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return dumps({"re": obj.real, "im": obj.imag})
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{_escape(k)}: {dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def record(command: str, inputs: dict, results, tolerances: dict, **extra) -> dict:
    out = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "metadata": {"tool": "fibspec", "version": __version__, "tolerances": tolerances},
    }
    out.update(extra)
    return out


def _emit(rec: dict, out=None):
    out = out or sys.stdout
    out.write(dumps(rec) + "\n")


def _error(command: str, inputs: dict, exc: Exception) -> dict:
    return record(command, inputs, None, {}, error={"type": type(exc).__name__, "message": str(exc)})


# -- commands ---------------------------------------------------------------------


def _require_rho(parser, args):
    if args.family == "G" and args.rho is None:
        parser.error("--rho is required for --family G")


def cmd_spectrum(args) -> tuple[dict, int]:
    kind = Kind.F if args.family == "F" else Kind.G
    inputs = {"family": args.family, "n": args.n, "rho": args.rho, "lambda": args.lam}
    spec = OperatorSpec(kind, args.n, args.rho)
    verdict = classify(spec, args.lam, args.tol)
    results = {
        "lambda": verdict.lam,
        "part": verdict.part,
        "boundary_flag": verdict.boundary_flag,
        "witness": verdict.witness,
    }
    return record("spectrum", inputs, results, {"tol": args.tol}), EXIT_OK


def _poly(args) -> CharPolynomial:
    if args.family == "F":
        return CharPolynomial.fibonacci(args.n)
    return CharPolynomial.fib_like(args.n, args.rho)


def root_rows(poly: CharPolynomial, tol: float) -> list[dict]:
    rows = []
    for z in all_roots(poly, tol).roots:
        mod = abs(z)
        rows.append(
            {
                "re": z.real,
                "im": z.imag,
                "modulus": mod,
                "in_point_spectrum": mod > 1 + tol,
                "near_unit_circle": abs(mod - 1) <= tol,
            }
        )
    return rows


def cmd_roots(args) -> tuple[dict | str, int]:
    poly = _poly(args)
    rows = root_rows(poly, args.tol)
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["re", "im", "modulus", "in_point_spectrum"])
        for r in rows:
            writer.writerow(
                [_fmt_float(r["re"]), _fmt_float(r["im"]), _fmt_float(r["modulus"]), str(r["in_point_spectrum"]).lower()]
            )
        return buf.getvalue(), EXIT_OK
    results = {"degree": poly.degree, "dominant": rows[0]["re"], "roots": rows}
    if poly.family is Family.FIB_LIKE and poly.n >= 2:
        rep = root_count_report(poly)
        results["root_count"] = {
            "rho_0": rep.rho_0,
            "lambda_1": rep.lambda_1,
            "regime": rep.regime,
            "interior_roots": rep.interior_roots,
        }
    inputs = {"family": args.family, "n": args.n, "rho": args.rho}
    return record("roots", inputs, results, {"tol": args.tol}), EXIT_OK


def cmd_fib(args) -> tuple[dict, int]:
    n, k = args.n, args.k
    value = sequences.term(n, k)
    results = {"value": str(value), "digits": len(str(value))}
    code = EXIT_OK
    if args.check:
        checks = {}
        total, rhs = sequences.prefix_sum_identity(sequences.sequence(n), k)
        checks["prefix_sum"] = {"sum": str(total), "rhs": str(rhs), "pass": total == rhs}
        spec = OperatorSpec(Kind.F, n)
        matrix_norm = exact_power_norm(spec, k, k + n + 2)
        if k > n:
            closed = sequences.norm_of_power(n, k)
            checks["norm_of_power"] = {
                "closed_form": str(closed),
                "truncated_matrix": str(matrix_norm),
                "pass": closed == matrix_norm,
            }
        else:
            rhs_norm = 1 + sum(sequences.sequence(n).terms(k))
            checks["norm_of_power"] = {
                "one_plus_prefix_sum": str(rhs_norm),
                "truncated_matrix": str(matrix_norm),
                "pass": rhs_norm == matrix_norm,
            }
        results["checks"] = checks
        results["pass"] = all(c["pass"] for c in checks.values())
        code = EXIT_OK if results["pass"] else EXIT_FAILED
    return record("fib", {"n": n, "k": k, "check": args.check}, results, {"exact": True}), code


def cmd_invasion(args) -> tuple[dict, int]:
    if args.kernel_file:
        model = InvasionModel.from_file(args.kernel_file, constant=args.const)
    else:
        model = InvasionModel(Kernel(args.kernel), sigma=args.sigma, constant=args.const)
    inputs = {
        "kernel": model.kernel,
        "sigma": None if args.kernel_file else args.sigma,
        "const": args.const,
        "kernel_file": args.kernel_file,
        "tol": args.tol,
    }
    tolerances = {"tol": args.tol}
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = minimize_speed(model, args.tol)
    except NoInteriorMinimum as exc:
        warning = {"type": "NoInteriorMinimum", "message": str(exc), "edge_values": exc.edge_values}
        return record("invasion", inputs, None, tolerances, warning=warning), EXIT_FAILED
    results = {
        "model": model.describe(),
        "v_star": res.v_star,
        "s_star": res.s_star,
        "lambda_at_s": res.lambda_at_s,
        "iterations": res.iterations,
        "bracket": list(res.bracket),
        "grid_validation": {
            "ok": res.grid_ok,
            "probes": 64,
            "grid_min": res.grid_min,
            "grid_argmin": res.grid_argmin,
        },
    }
    extra = {}
    if caught:
        extra["warning"] = {"type": "GridDisagreement", "message": str(caught[0].message)}
    return record("invasion", inputs, results, tolerances, **extra), EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    seed = args.seed
    env = os.environ.get("FIBSPEC_SEED")
    if env is not None:
        seed = int(env)
    reports = run_suites(args.suite, seed=seed, budget=args.budget)
    results = {}
    for rep in reports:
        entry = {"passed": rep.passed, "failed": rep.failed, "worst": rep.worst, "failures": rep.failures}
        if rep.table is not None:
            entry["table"] = rep.table
        results[rep.name] = entry
    ok = all(r.ok for r in reports)
    results["ok"] = ok
    inputs = {"suite": args.suite, "seed": seed, "budget": args.budget}
    tolerances = {"resolvent_residual": 1e-9, "oracle_gap": 1e-7, "identities": "exact"}
    return record("verify", inputs, results, tolerances), EXIT_OK if ok else EXIT_FAILED


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fibspec",
        description="Spectra of generalized Fibonacci (F) and Fibonacci-like (G) operators on l1.",
    )
    parser.add_argument("--version", action="version", version=f"fibspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def family_args(p):
        p.add_argument("--family", choices=["F", "G"], required=True)
        p.add_argument("--n", type=_positive_int, required=True)
        p.add_argument("--rho", type=_positive_float, help="required for --family G")

    p = sub.add_parser("spectrum", help="classify a complex lambda against the spectrum")
    family_args(p)
    p.add_argument("--lambda", dest="lam", type=parse_complex, required=True, help=COMPLEX_HELP)
    p.add_argument("--tol", type=_positive_float, default=ROOT_TOL)
    p.set_defaults(func=cmd_spectrum, needs_rho=True)

    p = sub.add_parser("roots", help="all characteristic roots, flagged by point-spectrum membership")
    family_args(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--tol", type=_positive_float, default=ROOTS_TOL)
    p.set_defaults(func=cmd_roots, needs_rho=True)

    p = sub.add_parser("fib", help="exact generalized Fibonacci number f^(n)_k")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)
    p.add_argument("--check", action="store_true", help="also run the sum and operator-norm identities")
    p.set_defaults(func=cmd_fib, needs_rho=False)

    p = sub.add_parser("invasion", help="invasion-speed bound v* for Gamma_5 with rho(s) = const * M(s)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--kernel", choices=["gaussian", "laplace"])
    src.add_argument("--kernel-file", help="two-column CSV s,M with strictly increasing s, header optional")
    p.add_argument("--sigma", type=_positive_float, default=1.0)
    p.add_argument(
        "--const", type=_positive_float, default=1.0,
        help="multiplier in rho(s) = const * M(s); the default 1 carries no model meaning, set it explicitly",
    )
    p.add_argument("--tol", type=_positive_float, default=1e-8, help="final golden-section bracket width")
    p.set_defaults(func=cmd_invasion, needs_rho=False)

    p = sub.add_parser("verify", help="run seeded self-check suites")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--seed", type=int, default=0, help="overridden by FIBSPEC_SEED")
    p.add_argument("--budget", type=_positive_int, default=None, help="cases per suite")
    p.set_defaults(func=cmd_verify, needs_rho=False)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.needs_rho:
        _require_rho(parser, args)
    out = out or sys.stdout
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundaryWarning)
            rec, code = args.func(args)
    except FibSpecError as exc:
        inputs = {k: v for k, v in vars(args).items() if k not in ("func", "needs_rho")}
        _emit(_error(args.command, inputs, exc), out)
        return EXIT_USAGE
    if isinstance(rec, str):
        out.write(rec)
    else:
        _emit(rec, out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
