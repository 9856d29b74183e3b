"""Command-line interface: coefficient tables, polynomial dumps, the
verification suite and coefficient plots against n.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical
non-convergence, 4 failed cross-check.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

from mpmath import mpf

from . import coeffs as C
from .errors import (
    CrossCheckFailure, DivisionByNearZero, NonConvergence, PositivityLoss,
    PrecisionExhausted, SingularPivot, ZeroDenominator,
)
from .moments import WeightSpec
from .numerics import format_scalar, to_scalar, working_precision

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_CROSSCHECK = 0, 2, 3, 4

COEFF_COLUMNS = ("n", "beta", "xi", "psi", "zeta", "a_hat", "b_hat", "a_tilde", "b_tilde", "h", "r")
FIGURE_COLUMNS = ("n", "beta", "xi", "zeta", "psi")
FAMILIES = ("P", "Q", "P_hat", "P_tilde", "Q_hat", "Q_tilde", "O", "S")
R_CAP = 12


class ConfigError(ValueError):
    pass


def _parse_t_list(text):
    if text is None:
        return []
    items = [s.strip() for s in text.split(",")]
    if not all(items):
        raise ConfigError(f"malformed t list {text!r}")
    return items


def _validate(args):
    """Parse every numeric string up front; raise :class:`ConfigError`."""
    if args.prec_bits < 64:
        raise ConfigError("--prec-bits must be at least 64")
    if getattr(args, "nmax", 0) < 0:
        raise ConfigError("--nmax must be non-negative")
    if args.digits_out < 1:
        raise ConfigError("--digits-out must be positive")
    for name in ("quad_tol", "tol_exact", "tol_quad"):
        try:
            v = to_scalar(getattr(args, name), args.prec_bits)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"--{name.replace('_', '-')}: {exc}") from exc
        if not v > 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be positive")
    args.t_values = _parse_t_list(getattr(args, "t", None))
    for t in args.t_values:
        try:
            to_scalar(t, args.prec_bits)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"--t: {exc}") from exc


def _fmt(x, digits):
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    return format_scalar(x, digits)


def _write_csv(out, header, rows):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(row) + "\n")


def _dump_json(out, obj):
    out.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _spec(args, t):
    return WeightSpec.make(t, args.prec_bits, args.quad_tol)


def _require_t(args):
    if not args.t_values:
        raise ConfigError("--t is required")


# ----------------------------------------------------------- commands

def cmd_coeffs(args, out):
    _require_t(args)
    blocks = []
    for t in args.t_values:
        spec = _spec(args, t)
        r_max = min(args.nmax, R_CAP)
        T = C.coefficient_tables(spec, args.nmax, r_max=max(r_max, 1))
        rows = []
        with working_precision(spec.bits):
            for n in range(args.nmax + 1):
                r = T.r[n] if n < len(T.r) else None
                vals = (T.beta[n], T.xi[n], T.psi[n], T.zeta[n], T.a_hat[n], T.b_hat[n],
                        T.a_tilde[n], T.b_tilde[n], T.h[n], r)
                rows.append([str(n)] + [_fmt(v, args.digits_out) for v in vals])
        _warn_sensitivity(spec, T, args)
        blocks.append((t, rows))
    if args.format == "json":
        _dump_json(out, [{"t": t, "rows": [dict(zip(COEFF_COLUMNS, _typed(r))) for r in rows]}
                         for t, rows in blocks])
    else:
        for k, (_, rows) in enumerate(blocks):
            if k:
                out.write("\n")
            _write_csv(out, COEFF_COLUMNS, rows)
    return EXIT_OK


def _typed(row):
    return [int(row[0])] + [v if v != "" else None for v in row[1:]]


def _warn_sensitivity(spec, T, args):
    """Forward ``xi`` amplifies input error; say so when the estimate
    exceeds the printed digits."""
    with working_precision(spec.bits):
        amp = C.xi_sensitivity((T.xi[0], T.xi[1]), T.beta, args.nmax)
        floor = mpf(10) ** (-mpf(spec.quad.precision_bits) * mpf("0.3"))
        bad = [n for n, a in enumerate(amp) if a * floor > mpf(10) ** (-args.digits_out)]
    if bad:
        print(f"warning: t={args_t(spec)}: xi_n for n >= {bad[0]} may carry fewer than "
              f"{args.digits_out} correct digits; raise --prec-bits", file=sys.stderr)


def args_t(spec):
    return format_scalar(spec.t, 20)


def _family(args):
    from .polyfam import build_P, build_Q, build_hermite, fold_to_laguerre
    n = args.n
    if args.family in ("O", "S"):
        o, s = build_hermite(max(n, 1))
        return (o if args.family == "O" else s)[n], None
    _require_t(args)
    if len(args.t_values) != 1:
        raise ConfigError("poly takes a single --t value")
    spec = _spec(args, args.t_values[0])
    degree = 2 * n + 1 if args.family not in ("P", "Q") else n
    T = C.coefficient_tables(spec, degree // 2 + 2, r_max=1)
    with working_precision(spec.bits):
        P = build_P(T, degree + 1)
        fam = P if args.family.startswith("P") else build_Q(T, P, degree + 1)
        if args.family in ("P", "Q"):
            return fam[n], spec
        hat, tilde = fold_to_laguerre(fam)
        return (hat if args.family.endswith("hat") else tilde)[n], spec


def cmd_poly(args, out):
    if args.n < 0:
        raise ConfigError("--n must be non-negative")
    p, spec = _family(args)
    bits = spec.bits if spec else args.prec_bits
    with working_precision(bits):
        vals = [_fmt(c, args.digits_out) for c in p.coeffs]
    if args.format == "json":
        _dump_json(out, vals)
    else:
        for v in vals:
            out.write(v + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    from .verify import REGISTRY, resolve_checks, run_suite
    names = None
    if args.checks:
        names = [c.strip() for c in args.checks.split(",") if c.strip()]
    try:
        selected = resolve_checks(names)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from exc
    if any(REGISTRY[n].t_dependent for n in selected):
        _require_t(args)
    report = run_suite(args.t_values, args.nmax, args.prec_bits, args.quad_tol,
                       args.tol_exact, args.tol_quad, selected)
    d = args.digits_out
    records = []
    for r in report.records:
        records.append({
            "check_id": r.check_id,
            "t": None if r.t is None else format_scalar(r.t, d),
            "index_range": list(r.index_range),
            "max_abs_residual": format_scalar(r.max_abs_residual, 6),
            "max_rel_residual": format_scalar(r.max_rel_residual, 6),
            "tolerance": format_scalar(r.tolerance, 6),
            "pass": r.passed,
            "runtime_ms": r.runtime_ms,
            "paper_ref": r.paper_ref,
            "extra": r.extra,
        })
    config = {
        "t": args.t_values, "n_max": args.nmax, "prec_bits": args.prec_bits,
        "quad_tol": args.quad_tol, "tol_exact": args.tol_exact, "tol_quad": args.tol_quad,
        "checks": selected,
    }
    _dump_json(out, {"config": config, "records": records, "all_pass": report.all_pass})
    return EXIT_OK if report.all_pass else EXIT_CROSSCHECK


def cmd_figure(args, out):
    from .verify import figure_data
    _require_t(args)
    blocks = []
    for t in args.t_values:
        series = figure_data(t, args.nmax, args.prec_bits, args.quad_tol)
        spec = _spec(args, t)
        with working_precision(spec.bits):
            rows = [[str(n)] + [_fmt(v, args.digits_out) for v in vals]
                    for n, *vals in series.rows()]
            T = C.coefficient_tables(spec, args.nmax, r_max=1)
        _warn_sensitivity(spec, T, args)
        blocks.append((t, rows))
    if args.format == "json":
        _dump_json(out, [{"t": t, "rows": [dict(zip(FIGURE_COLUMNS, _typed(r))) for r in rows]}
                         for t, rows in blocks])
    else:
        for k, (_, rows) in enumerate(blocks):
            if k:
                out.write("\n")
            _write_csv(out, FIGURE_COLUMNS, rows)
    return EXIT_OK


# ------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--t", help="weight parameter, or a comma-separated list")
    common.add_argument("--nmax", type=int, default=40, help="largest index (default 40)")
    common.add_argument("--prec-bits", type=int, default=256, help="binary precision (default 256)")
    common.add_argument("--quad-tol", default="1e-40", help="quadrature tolerance (default 1e-40)")
    common.add_argument("--tol-exact", default="1e-18", help="algebraic-identity tolerance")
    common.add_argument("--tol-quad", default="1e-12", help="quadrature-backed tolerance")
    common.add_argument("--digits-out", type=int, default=30, help="significant digits printed")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write here instead of standard output")

    parser = _Parser(prog="freudskew", description=__doc__.split("\n\n")[0].replace("\n", " "))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("coeffs", parents=[common], help="coefficient tables")
    p = sub.add_parser("poly", parents=[common], help="coefficients of one polynomial")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    v = sub.add_parser("verify", parents=[common], help="run identity checks")
    v.add_argument("--checks", help="comma-separated check ids (default: all)")
    v.set_defaults(nmax=12)
    sub.add_parser("figure", parents=[common], help="beta, xi, zeta, psi against n")
    return parser


COMMANDS = {"coeffs": cmd_coeffs, "poly": cmd_poly, "verify": cmd_verify, "figure": cmd_figure}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        buf = io.StringIO()
        code = COMMANDS[args.command](args, buf)
    except ConfigError as exc:
        print(f"freudskew: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, PrecisionExhausted, SingularPivot, DivisionByNearZero,
            ZeroDenominator) as exc:
        print(f"freudskew: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CrossCheckFailure, PositivityLoss) as exc:
        print(f"freudskew: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
