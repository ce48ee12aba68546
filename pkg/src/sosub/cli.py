"""Command-line entry point: ``sosub <subcommand> ...``.

Exit codes: 0 success, 2 bad input (parse errors, invalid options),
3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from . import experiments as ex
from .bounds import compute_bound
from .measures import MeasureParseError, parse_measure
from .numerics import working_precision
from .polyring import PolynomialError, format_poly, parse_poly

EXIT_PARSE = 2
EXIT_SOLVER = 3


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--precision-bits", type=int, default=None, help="working precision (default: env SOSUB_PRECISION_BITS or 512)")
    p.add_argument("--out-dir", default=None, help="directory for CSV/SVG output")
    p.add_argument("--r-max", type=int, default=None)
    p.add_argument("--format", dest="fmt", choices=("csv", "csv+svg"), default=None)
    p.add_argument("--config", default=None, help="JSON config file (flags take precedence)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sosub", description="Measure-based upper bounds for polynomial minimization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="compute one bound and print a CSV row")
    _common(p)
    p.add_argument("--kind", choices=("ub", "ubpf"), default="ub")
    p.add_argument("--f", required=True, help='polynomial, e.g. "x1^2 + x1^6"')
    p.add_argument("--measure", required=True, help="gamma:alpha=2,n=1 or box:-1..1")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--no-header", action="store_true")

    p = sub.add_parser("table1", help="reproduce the standard vs push-forward table")
    _common(p)

    p = sub.add_parser("nonconv-lsl", help="ub(x^2, Gamma_alpha, r) for alpha in (0,1) vs the Gaussian control")
    _common(p)
    p.add_argument("--alpha", default="0.5")
    p.add_argument("--plateau-threshold", type=float, default=None)

    p = sub.add_parser("nonconv-pf", help="ubpf vs ub at level 2r for x^2 + x^(2(ceil(alpha)+1))")
    _common(p)
    p.add_argument("--alpha", default="2")
    p.add_argument("--r-min", type=int, default=1)
    p.add_argument("--g", default=None, help="override the polynomial (e.g. x1^6)")

    p = sub.add_parser("density-compare", help="empirical sandwich constants between push-forward densities")
    _common(p)
    p.add_argument("--alpha", default="2")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--beta", default="0.95")
    p.add_argument("--grid-lo", default=None)
    p.add_argument("--grid-hi", default=None)
    p.add_argument("--grid-points", type=int, default=None)

    p = sub.add_parser("deriv-ratio", help="sup |p'| w / int |p| w along ub(x^2, Gamma_alpha, r)")
    _common(p)
    p.add_argument("--alpha", default="0.5")
    p.add_argument("--r-min", type=int, default=0)

    p = sub.add_parser("compact-rate", help="decay of ub and ubpf for x1 on [-1, 1]")
    _common(p)
    return parser


def _config(args) -> ex.ExperimentConfig:
    flags = {
        "precision_bits": args.precision_bits,
        "output_dir": args.out_dir,
        "r_max": args.r_max,
        "fmt": args.fmt,
    }
    for name in ("grid_lo", "grid_hi", "grid_points", "plateau_threshold"):
        if hasattr(args, name):
            flags[name] = getattr(args, name)
    return ex.load_config(flags, args.config)


def cmd_bound(args, cfg: ex.ExperimentConfig, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        mu = parse_measure(args.measure)
        with working_precision(cfg.precision_bits):
            f = parse_poly(args.f, mu.n_vars)
    except (MeasureParseError, PolynomialError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.r < 0:
        print("error: --r must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    try:
        res = compute_bound(f, mu, args.r, "standard" if args.kind == "ub" else "pushforward", precision_bits=cfg.precision_bits)
    except (ArithmeticError, ValueError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    w = csv.writer(out, lineterminator="\n")
    if not args.no_header:
        w.writerow(["kind", "f", "measure", "r", "value", "precision_bits", "eig_residual"])
    digits = cfg.digits
    w.writerow(
        [
            args.kind,
            format_poly(f),
            str(mu),
            args.r,
            ex.fmt_big(res.value, digits),
            res.diagnostics.precision_bits,
            ex.fmt_big(res.diagnostics.eig_residual, 6),
        ]
    )
    return 0


def _print_rows(header, rows, digits=8, out=None):
    w = csv.writer(sys.stdout if out is None else out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([ex.fmt_big(v, digits) for v in row])


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    if args.command == "bound":
        return cmd_bound(args, cfg)

    try:
        if args.command == "table1":
            rows = ex.table1(cfg)
            _print_rows(["bound"] + [f"r={r}" for r in ex.TABLE1_LEVELS], rows)
        elif args.command == "nonconv-lsl":
            rows = ex.nonconvergence_lsl(cfg, Fraction(args.alpha))
            header = ["r", "ub_lsl", "ub_control", "rel_decrease", "plateau", "ratio"]
            _print_rows(header, [[row[h] for h in header] for row in rows])
        elif args.command == "nonconv-pf":
            g = None
            if args.g is not None:
                with working_precision(cfg.precision_bits):
                    g = parse_poly(args.g, 1)
            rows = ex.nonconvergence_pf(cfg, Fraction(args.alpha), r_min=args.r_min, g=g)
            header = ["r", "ubpf", "ub_2r", "gap", "sandwich_ok"]
            _print_rows(header, [[row[h] for h in header] for row in rows])
        elif args.command == "density-compare":
            rep = ex.density_compare(cfg, Fraction(args.alpha), args.d, Fraction(args.beta))
            _print_rows(
                ["c1", "c1_argmin", "c2", "c2_argmin", "inverse_bracket_ok", "tail_ratio_increasing"],
                [[rep.c1, rep.c1_argmin, rep.c2, rep.c2_argmin, rep.inverse_bracket_ok, rep.tail_ratio_increasing]],
            )
        elif args.command == "deriv-ratio":
            recs = ex.deriv_ratio(cfg, Fraction(args.alpha), r_min=args.r_min)
            _print_rows(["r", "ub_value", "sup_ratio"], [[r.r, r.ub_value, r.sup_ratio] for r in recs])
        elif args.command == "compact-rate":
            res = ex.compact_rate(cfg)
            _print_rows(["r", "ub_err", "ubpf_err"], [[row["r"], row["ub_err"], row["ubpf_err"]] for row in res["rows"]])
            print(f"# ub_slope={res['ub_slope']} ubpf_slope={res['ubpf_slope']}")
    except ex.ExperimentError as exc:
        print(f"solver error in {exc.cell}: {exc.cause}", file=sys.stderr)
        return EXIT_SOLVER
    except (PolynomialError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    return 0


if __name__ == "__main__":
    sys.exit(main())
