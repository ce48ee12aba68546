"""Experiment drivers behind the CLI.

Each driver returns plain row dicts (mpf values) and, given a config with an
output directory, writes them as CSV plus an optional SVG chart. Files are
written to a temporary sibling and renamed into place.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from mpmath import mp, mpf

from .bounds import BoundResult, compute_ub, compute_ubpf
from .measures import GammaAlpha, UniformBox, density_w_alpha
from .numerics import PRECISION_ENV_VAR, check_precision, default_precision, to_big, working_precision
from .polyring import Polynomial, derivative, format_poly
from .pushforward import DensityCompareReport, density_compare_report

TABLE1_LEVELS = (4, 6, 8, 10, 12, 14)

# Reference values (2 d.p.) for the table1 experiment, per row label, in TABLE1_LEVELS order.
TABLE1_PUBLISHED = {
    "ubpf(x^2+x^6)": (1.67, 1.60, 1.56, 1.54, 1.52, 1.50),
    "ub2r(x^2+x^6)": (0.22, 0.14, 0.10, 0.08, 0.07, 0.06),
    "ubpf(x^6)": (1.24, 1.18, 1.15, 1.12, 1.10, 1.09),
    "ub2r(x^6)": (0.06, 0.03, 0.01, 0.01, 0.01, 0.00),
}


class ExperimentError(RuntimeError):
    """A solver failure inside an experiment, tagged with the failing cell."""

    def __init__(self, cell: str, cause: BaseException):
        self.cell = cell
        self.cause = cause
        super().__init__(f"{cell}: {cause}")


@dataclass
class ExperimentConfig:
    precision_bits: int = 512
    output_dir: Path | None = None
    r_max: int = 20
    fmt: str = "csv+svg"
    grid_lo: str = "1e-6"
    grid_hi: str = "1e6"
    grid_points: int = 2000
    plateau_threshold: float = 0.02
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.precision_bits = check_precision(self.precision_bits)
        if self.r_max < 1:
            raise ValueError("r_max must be >= 1")
        if self.fmt not in ("csv", "csv+svg"):
            raise ValueError(f"format must be 'csv' or 'csv+svg', got {self.fmt!r}")
        if self.output_dir is not None:
            self.output_dir = Path(self.output_dir)

    @property
    def digits(self) -> int:
        return decimal_digits(self.precision_bits)


def load_config(
    flags: dict | None = None,
    config_file: str | os.PathLike | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    """Merge settings: flags > JSON config file > ``SOSUB_PRECISION_BITS`` > defaults.

    ``flags`` entries that are ``None`` count as unset.
    """
    env = os.environ if env is None else env
    values: dict = {}
    if PRECISION_ENV_VAR in env:
        values["precision_bits"] = int(env[PRECISION_ENV_VAR])
    if config_file is not None:
        with open(config_file) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        known = set(ExperimentConfig.__dataclass_fields__)
        for key, val in data.items():
            key = key.replace("-", "_")
            if key == "out_dir":
                key = "output_dir"
            if key == "format":
                key = "fmt"
            if key in known:
                values[key] = val
            else:
                values.setdefault("extra", {})[key] = val
    for key, val in (flags or {}).items():
        if val is not None:
            values[key] = val
    return ExperimentConfig(**values)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def decimal_digits(bits: int) -> int:
    return max(17, int(bits * math.log10(2)))


def fmt_big(x, digits: int) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, int, str)):
        return str(x)
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if not isinstance(x, mpf):
        x = to_big(x)
    if mp.isnan(x):
        return "nan"
    return mp.nstr(x, digits, strip_zeros=False)


def fmt_2dp(x) -> str:
    if isinstance(x, (bool, str)) or x is None:
        return fmt_big(x, 17)
    cents = int(mp.nint(to_big(x) * 100))
    sign = "-" if cents < 0 else ""
    return f"{sign}{abs(cents) // 100}.{abs(cents) % 100:02d}"


def atomic_write(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def rows_to_csv(header: Sequence[str], rows: Iterable[Sequence], formatter) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([formatter(v) for v in row])
    return buf.getvalue()


def write_csv(cfg: ExperimentConfig, name: str, header, rows, rounded: bool = False) -> list[Path]:
    """Write ``name.csv`` at full precision (and ``name_2dp.csv`` if ``rounded``)."""
    if cfg.output_dir is None:
        return []
    rows = list(rows)
    out = [atomic_write(cfg.output_dir / f"{name}.csv", rows_to_csv(header, rows, lambda v: fmt_big(v, cfg.digits)))]
    if rounded:
        out.append(atomic_write(cfg.output_dir / f"{name}_2dp.csv", rows_to_csv(header, rows, fmt_2dp)))
    return out


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")


def svg_line_chart(
    series: dict[str, Sequence[tuple[float, float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
    logy: bool = False,
    width: int = 640,
    height: int = 400,
) -> str:
    """A small self-contained SVG line chart."""
    tx = (lambda v: math.log10(v)) if logx else (lambda v: v)
    ty = (lambda v: math.log10(v)) if logy else (lambda v: v)
    pts = {
        name: [(tx(x), ty(y)) for x, y in data if (not logx or x > 0) and (not logy or y > 0) and math.isfinite(y)]
        for name, data in series.items()
    }
    allx = [p[0] for d in pts.values() for p in d] or [0.0, 1.0]
    ally = [p[1] for d in pts.values() for p in d] or [0.0, 1.0]
    x0, x1 = min(allx), max(allx)
    y0, y1 = min(ally), max(ally)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb

    def sx(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return mt + ph - (v - y0) / (y1 - y0) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="14">{_esc(title)}</text>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        lx = f"1e{fx:.1f}" if logx else f"{fx:.3g}"
        ly = f"1e{fy:.1f}" if logy else f"{fy:.3g}"
        parts.append(f'<text x="{sx(fx):.1f}" y="{mt + ph + 16}" text-anchor="middle">{lx}</text>')
        parts.append(f'<text x="{ml - 6}" y="{sy(fy) + 4:.1f}" text-anchor="end">{ly}</text>')
    parts.append(f'<text x="{ml + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">{_esc(xlabel)}</text>')
    parts.append(
        f'<text x="16" y="{mt + ph / 2:.1f}" text-anchor="middle" transform="rotate(-90 16 {mt + ph / 2:.1f})">{_esc(ylabel)}</text>'
    )
    for k, (name, data) in enumerate(pts.items()):
        color = _PALETTE[k % len(_PALETTE)]
        if data:
            path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in data)
            parts.append(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{ml + 10}" y="{mt + 16 + 14 * k}" fill="{color}">{_esc(name)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(cfg: ExperimentConfig, name: str, svg: str) -> list[Path]:
    if cfg.output_dir is None or cfg.fmt != "csv+svg":
        return []
    return [atomic_write(cfg.output_dir / f"{name}.svg", svg)]


def _cell(label: str, fn, *args, **kw) -> BoundResult:
    try:
        return fn(*args, **kw)
    except (ArithmeticError, ValueError) as exc:
        raise ExperimentError(label, exc) from exc


# ---------------------------------------------------------------------------
# Standard vs push-forward table
# ---------------------------------------------------------------------------


def table1(cfg: ExperimentConfig, levels: Sequence[int] = TABLE1_LEVELS) -> list[list]:
    """Push-forward bounds at level r and standard bounds at level 2r under Gamma_2.

    Returns rows ``[label, v_r1, v_r2, ...]`` in the published layout.
    """
    mu = GammaAlpha(2)
    polys = (("x^2+x^6", Polynomial.univariate({2: 1, 6: 1})), ("x^6", Polynomial.univariate({6: 1})))
    rows = []
    for name, f in polys:
        pf_row = [f"ubpf({name})"]
        ub_row = [f"ub2r({name})"]
        for r in levels:
            pf_row.append(_cell(f"ubpf({name}), r={r}", compute_ubpf, f, mu, r, cfg.precision_bits).value)
            ub_row.append(_cell(f"ub({name}), level {2 * r}", compute_ub, f, mu, 2 * r, cfg.precision_bits).value)
        rows.extend([pf_row, ub_row])
    header = ["bound"] + [f"r={r}" for r in levels]
    write_csv(cfg, "table1", header, rows, rounded=True)
    series = {row[0]: [(r, float(v)) for r, v in zip(levels, row[1:])] for row in rows}
    write_svg(cfg, "table1", svg_line_chart(series, "Standard vs push-forward bounds, Gamma_2", "r", "bound"))
    return rows


# ---------------------------------------------------------------------------
# Non-convergence experiments
# ---------------------------------------------------------------------------


def nonconvergence_lsl(cfg: ExperimentConfig, alpha="0.5", r_max: int | None = None, r_min: int = 1) -> list[dict]:
    """ub(x^2, Gamma_alpha, r) next to the Gaussian control ub(x^2, Gamma_2, r)."""
    alpha_q = Fraction(alpha) if isinstance(alpha, str) else Fraction(alpha)
    if not 0 < alpha_q < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha_q}")
    r_max = cfg.r_max if r_max is None else r_max
    f = Polynomial.univariate({2: 1})
    rows = []
    prev = None
    thr = to_big(cfg.plateau_threshold)
    for r in range(r_min, r_max + 1):
        val = _cell(f"ub(x^2, Gamma_{alpha_q}), r={r}", compute_ub, f, GammaAlpha(alpha_q), r, cfg.precision_bits).value
        ctrl = _cell(f"ub(x^2, Gamma_2), r={r}", compute_ub, f, GammaAlpha(2), r, cfg.precision_bits).value
        with working_precision(cfg.precision_bits):
            rel = (prev - val) / prev if prev is not None else None
        rows.append(
            {
                "r": r,
                "ub_lsl": val,
                "ub_control": ctrl,
                "rel_decrease": rel,
                "plateau": (rel is not None and rel < thr),
                "ratio": _div(val, ctrl, cfg.precision_bits),
            }
        )
        prev = val
    header = ["r", "ub_lsl", "ub_control", "rel_decrease", "plateau", "ratio"]
    write_csv(cfg, f"nonconv_lsl_alpha{_tag(alpha_q)}", header, [[row[h] for h in header] for row in rows])
    series = {
        f"ub(x^2, Gamma_{float(alpha_q):g})": [(row["r"], float(row["ub_lsl"])) for row in rows],
        "ub(x^2, Gamma_2)": [(row["r"], float(row["ub_control"])) for row in rows],
    }
    write_svg(cfg, f"nonconv_lsl_alpha{_tag(alpha_q)}", svg_line_chart(series, "LSL non-convergence", "r", "bound", logy=True))
    return rows


def _div(a, b, bits):
    with working_precision(bits):
        return a / b


def nonconv_pf_polynomial(alpha) -> Polynomial:
    """``x^2 + x^(2(ceil(alpha) + 1))``."""
    d = math.ceil(Fraction(alpha)) + 1
    return Polynomial.univariate({2: 1, 2 * d: 1})


def nonconvergence_pf(
    cfg: ExperimentConfig,
    alpha=2,
    r_max: int | None = None,
    r_min: int = 1,
    g: Polynomial | None = None,
    levels: Sequence[int] | None = None,
) -> list[dict]:
    """ubpf(g, Gamma_alpha, r) next to the standard bound ub(g, Gamma_alpha, 2r)."""
    alpha_q = Fraction(alpha)
    if alpha_q <= 0:
        raise ValueError("alpha must be positive")
    g = nonconv_pf_polynomial(alpha_q) if g is None else g
    mu = GammaAlpha(alpha_q)
    r_max = cfg.r_max if r_max is None else r_max
    levels = list(range(r_min, r_max + 1)) if levels is None else list(levels)
    name = format_poly(g)
    rows = []
    for r in levels:
        pf = _cell(f"ubpf({name}), r={r}", compute_ubpf, g, mu, r, cfg.precision_bits).value
        ub = _cell(f"ub({name}), level {2 * r}", compute_ub, g, mu, 2 * r, cfg.precision_bits).value
        with working_precision(cfg.precision_bits):
            gap = pf - ub
        rows.append({"r": r, "ubpf": pf, "ub_2r": ub, "gap": gap, "sandwich_ok": bool(pf >= ub)})
    header = ["r", "ubpf", "ub_2r", "gap", "sandwich_ok"]
    tag = f"nonconv_pf_alpha{_tag(alpha_q)}_{_poly_tag(g)}"
    write_csv(cfg, tag, header, [[row[h] for h in header] for row in rows], rounded=True)
    series = {
        f"ubpf({name})": [(row["r"], float(row["ubpf"])) for row in rows],
        f"ub_2r({name})": [(row["r"], float(row["ub_2r"])) for row in rows],
    }
    write_svg(cfg, tag, svg_line_chart(series, f"Push-forward vs standard, Gamma_{float(alpha_q):g}", "r", "bound"))
    return rows


def _tag(q: Fraction) -> str:
    return str(float(q)).replace(".", "p").rstrip("0").rstrip("p") if q.denominator != 1 else str(q.numerator)


def _poly_tag(p: Polynomial) -> str:
    return format_poly(p).replace(" ", "").replace("^", "").replace("+", "_").replace("*", "")


# ---------------------------------------------------------------------------
# Density comparison
# ---------------------------------------------------------------------------


def density_compare(cfg: ExperimentConfig, alpha=2, d: int = 3, beta="0.95", g: Polynomial | None = None) -> DensityCompareReport:
    rep = density_compare_report(
        Fraction(alpha),
        d,
        Fraction(beta),
        g=g,
        grid_lo=cfg.grid_lo,
        grid_hi=cfg.grid_hi,
        grid_points=cfg.grid_points,
        precision_bits=min(cfg.precision_bits, 128),
    )
    tag = f"density_compare_alpha{_tag(rep.alpha)}_d{d}_beta{_tag(rep.beta)}"
    summary = [
        ("alpha", rep.alpha),
        ("beta", rep.beta),
        ("d", rep.d),
        ("g", format_poly(rep.g)),
        ("grid_lo", rep.grid_lo),
        ("grid_hi", rep.grid_hi),
        ("grid_points", rep.grid_points),
        ("c1", rep.c1),
        ("c1_argmin", rep.c1_argmin),
        ("c2", rep.c2),
        ("c2_argmin", rep.c2_argmin),
        ("delta", rep.delta),
        ("beta_condition", rep.beta_condition),
        ("inverse_bracket_ok", rep.inverse_bracket_ok),
        ("inverse_deriv_bracket_ok", rep.inverse_deriv_bracket_ok),
        ("outer_deriv_bound_ok", rep.outer_deriv_bound_ok),
        ("interval_density_bracket_ok", rep.interval_density_bracket_ok),
        ("tail_ratio_increasing", rep.tail_ratio_increasing),
    ]
    digits = decimal_digits(min(cfg.precision_bits, 128))
    if cfg.output_dir is not None:
        atomic_write(cfg.output_dir / f"{tag}.csv", rows_to_csv(["quantity", "value"], summary, lambda v: fmt_big(v, digits)))
        atomic_write(
            cfg.output_dir / f"{tag}_grid.csv",
            rows_to_csv(["x", "g_density", "f_density", "g_over_f"], rep.rows, lambda v: fmt_big(v, digits)),
        )
    series = {
        "g#w_alpha": [(float(x), float(gd)) for x, gd, fd, _ in rep.rows if gd > mpf("1e-300")],
        "f#w_beta": [(float(x), float(fd)) for x, gd, fd, _ in rep.rows if fd > mpf("1e-300")],
    }
    write_svg(cfg, tag, svg_line_chart(series, "Push-forward densities", "x", "density", logx=True, logy=True))
    return rep


# ---------------------------------------------------------------------------
# Derivative ratio (L1 Markov-type probe)
# ---------------------------------------------------------------------------


@dataclass
class DerivRatioRecord:
    r: int
    ub_value: mpf
    sup_ratio: mpf
    sup_at: mpf | None
    l1_norm: mpf


def _sign_changes(p: Polynomial, xs: Sequence[mpf]) -> list[mpf]:
    roots = []
    vals = [p(x) for x in xs]
    for i in range(len(xs) - 1):
        if vals[i] == 0:
            roots.append(xs[i])
        elif (vals[i] > 0) != (vals[i + 1] > 0) and vals[i + 1] != 0:
            roots.append(mp.findroot(lambda t: p(t), (xs[i], xs[i + 1]), solver="anderson"))
    return roots


def weighted_l1(p: Polynomial, alpha) -> mpf:
    """``int |p(x)| w_alpha(x) dx`` by tanh-sinh quadrature split at the real roots of ``p``."""
    a = to_big(Fraction(alpha))
    deg = max(int(p.degree()), 1)
    reach = (4 * (deg + 2) / a) ** (1 / a) + 10
    xs = [-reach + 2 * reach * i / 4000 for i in range(4001)]
    pts = [-mp.inf] + sorted(_sign_changes(p, xs)) + [mp.inf]
    # Extra breakpoints where the integrand peaks help tanh-sinh with heavy tails.
    for t in (1, (deg / a) ** (1 / a)):
        pts.extend([-to_big(t), to_big(t)])
    pts = sorted(set(pts))
    return mp.quad(lambda x: abs(p(x)) * density_w_alpha(alpha, x), pts)


def deriv_ratio(cfg: ExperimentConfig, alpha="0.5", r_max: int | None = None, r_min: int = 0, grid_points: int = 4001) -> list[DerivRatioRecord]:
    """``sup |p'| w_alpha / int |p| w_alpha`` for ``p = sqrt(sigma)`` of ub(x^2, Gamma_alpha, r)."""
    alpha_q = Fraction(alpha)
    r_max = cfg.r_max if r_max is None else r_max
    f = Polynomial.univariate({2: 1})
    out = []
    for r in range(r_min, r_max + 1):
        res = _cell(f"ub(x^2, Gamma_{alpha_q}), r={r}", compute_ub, f, GammaAlpha(alpha_q), r, cfg.precision_bits)
        with working_precision(min(cfg.precision_bits, 192)):
            p = res.root
            dp = derivative(p)
            a = to_big(alpha_q)
            deg = max(int(p.degree()), 1)
            reach = (4 * (deg + 2) / a) ** (1 / a) + 10
            # Log-spaced magnitudes on both sides of the origin plus the origin itself.
            half = log_magnitudes(mpf("1e-4"), reach, grid_points // 2)
            xs = [-x for x in reversed(half)] + [mpf(0)] + half
            best, best_x = mpf(0), None
            for x in xs:
                v = abs(dp(x)) * density_w_alpha(alpha_q, x)
                if v > best:
                    best, best_x = v, x
            l1 = weighted_l1(p, alpha_q)
            out.append(DerivRatioRecord(r, res.value, best / l1, best_x, l1))
    header = ["r", "ub_value", "sup_ratio", "sup_at", "l1_norm"]
    write_csv(
        cfg,
        f"deriv_ratio_alpha{_tag(alpha_q)}",
        header,
        [[rec.r, rec.ub_value, rec.sup_ratio, rec.sup_at, rec.l1_norm] for rec in out],
    )
    write_svg(
        cfg,
        f"deriv_ratio_alpha{_tag(alpha_q)}",
        svg_line_chart({"sup ratio": [(rec.r, float(rec.sup_ratio)) for rec in out]}, "Derivative ratio", "r", "ratio"),
    )
    return out


def log_magnitudes(lo, hi, count: int) -> list[mpf]:
    lo, hi = to_big(lo), to_big(hi)
    a, b = mp.log(lo), mp.log(hi)
    return [mp.exp(a + (b - a) * i / (count - 1)) for i in range(count)]


# ---------------------------------------------------------------------------
# Compact-set decay
# ---------------------------------------------------------------------------


def compact_rate(cfg: ExperimentConfig, r_max: int | None = None, f: Polynomial | None = None, f_min=-1) -> dict:
    """ub and ubpf of ``f`` (default ``x1``) on the box [-1, 1], with a log-log slope fit."""
    r_max = cfg.r_max if r_max is None else r_max
    if r_max < 4:
        raise ValueError("r_max must be >= 4")
    f = Polynomial.univariate({1: 1}) if f is None else f
    mu = UniformBox(((-1, 1),))
    rows = []
    for r in range(1, r_max + 1):
        ub = _cell(f"ub, r={r}", compute_ub, f, mu, r, cfg.precision_bits).value
        pf = _cell(f"ubpf, r={r}", compute_ubpf, f, mu, r, cfg.precision_bits).value
        with working_precision(cfg.precision_bits):
            fmin = to_big(f_min)
            rows.append({"r": r, "ub": ub, "ubpf": pf, "ub_err": ub - fmin, "ubpf_err": pf - fmin})
    top = [row for row in rows if row["r"] > r_max // 2]

    def slope(key):
        pts = [(math.log(row["r"]), float(mp.log(row[key]))) for row in top if row[key] > 0]
        if len(pts) < 2:
            return None
        return statistics.linear_regression([p[0] for p in pts], [p[1] for p in pts]).slope

    fit = {"ub_slope": slope("ub_err"), "ubpf_slope": slope("ubpf_err")}
    header = ["r", "ub", "ubpf", "ub_err", "ubpf_err"]
    write_csv(cfg, "compact_rate", header, [[row[h] for h in header] for row in rows])
    if cfg.output_dir is not None:
        atomic_write(
            cfg.output_dir / "compact_rate_fit.csv",
            rows_to_csv(["quantity", "value"], [(k, "" if v is None else repr(v)) for k, v in fit.items()], str),
        )
    series = {
        "ub - f_min": [(row["r"], float(row["ub_err"])) for row in rows],
        "ubpf - f_min": [(row["r"], float(row["ubpf_err"])) for row in rows],
    }
    write_svg(cfg, "compact_rate", svg_line_chart(series, "Decay on [-1, 1]", "r", "error", logx=True, logy=True))
    return {"rows": rows, **fit}


__all__ = [
    "TABLE1_LEVELS",
    "TABLE1_PUBLISHED",
    "ExperimentConfig",
    "ExperimentError",
    "load_config",
    "table1",
    "nonconvergence_lsl",
    "nonconvergence_pf",
    "nonconv_pf_polynomial",
    "density_compare",
    "deriv_ratio",
    "DerivRatioRecord",
    "weighted_l1",
    "compact_rate",
    "svg_line_chart",
    "fmt_big",
    "fmt_2dp",
    "default_precision",
]
