"""Push-forward measures ``f_# mu`` on the real line.

Moments come for free from the base measure: the k-th moment of ``f_# mu`` is
``int f^k dmu``. Densities are only needed for univariate even ``f`` under
Gamma_alpha, where substitution gives

    f_# w(x) = 2 w(f^{-1}(x)) / f'(f^{-1}(x)),    x > 0,

with ``f^{-1}`` the positive branch of the inverse. For ``f = x^2`` this is the
closed form ``C_beta exp(-x^(beta/2)) / sqrt(x)``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from mpmath import mp, mpf

from .measures import MomentSequence, density_w_alpha, integrate_poly, normalizing_constant
from .numerics import BracketInvalid, DomainError, bisect_root, to_big, to_fraction, working_precision
from .polyring import Polynomial, VarMismatch, all_even, derivative, poly_mul

DEFAULT_DEGREE_BUDGET = 400


class DegreeBudgetExceeded(ValueError):
    pass


class InversionFailed(ArithmeticError):
    pass


class PushforwardMoments:
    """Moments ``int f^k dmu`` of the push-forward of ``base`` by ``f``.

    Powers of ``f`` are built incrementally and cached alongside the moments.
    """

    def __init__(self, f: Polynomial, base: MomentSequence, degree_budget: int = DEFAULT_DEGREE_BUDGET):
        if f.n_vars != base.n_vars:
            raise VarMismatch(f"f has {f.n_vars} variables, measure has {base.n_vars}")
        self.f = f
        self.base = base
        self.degree_budget = degree_budget
        self._powers: list[Polynomial] = [Polynomial.constant(1, f.n_vars)]
        self._cache: dict[int, mpf] = {}
        self._lock = threading.Lock()

    @property
    def precision_bits(self) -> int:
        return self.base.precision_bits

    def _power(self, k: int) -> Polynomial:
        while len(self._powers) <= k:
            self._powers.append(poly_mul(self._powers[-1], self.f))
        return self._powers[k]

    def moment(self, k: int) -> mpf:
        if k < 0:
            raise ValueError("moment order must be non-negative")
        val = self._cache.get(k)
        if val is not None:
            return val
        deg = max(self.f.degree(), 0) * k
        if deg > self.degree_budget:
            raise DegreeBudgetExceeded(
                f"f^{k} has degree {deg}, above the budget of {self.degree_budget}"
            )
        with self._lock, working_precision(self.precision_bits):
            val = self._cache.get(k)
            if val is None:
                val = integrate_poly(self.base, self._power(k))
                self._cache[k] = val
        return val

    def moments(self, count: int) -> list[mpf]:
        return [self.moment(k) for k in range(count)]


def pf_moment(pm: PushforwardMoments, k: int) -> mpf:
    return pm.moment(k)


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def density_f_sq(beta, x) -> mpf:
    """Density of the push-forward of Gamma_beta by ``x -> x^2``."""
    b = to_big(to_fraction(beta))
    x = to_big(x)
    if b <= 0:
        raise DomainError("beta must be positive")
    if x <= 0:
        raise DomainError(f"density_f_sq is defined for x > 0, got {x}")
    return normalizing_constant(beta) * mp.exp(-(x ** (b / 2))) / mp.sqrt(x)


class EvenPolyDensity:
    """Push-forward of univariate Gamma_alpha by an even polynomial ``g``.

    ``g`` must have only even-degree terms with non-negative coefficients and
    no constant term, so it is strictly increasing on ``x > 0`` with
    ``g(0) = 0``.
    """

    def __init__(self, g: Polynomial, alpha):
        if g.n_vars != 1:
            raise VarMismatch("EvenPolyDensity needs a univariate polynomial")
        if g.is_zero() or not all_even(g) or any(c < 0 for c in g.terms.values()):
            raise ValueError(f"{g} is not an even polynomial with non-negative coefficients")
        if g.coeff((0,)) != 0:
            raise ValueError("g must vanish at the origin")
        self.g = g
        self.dg = derivative(g)
        self.alpha = to_fraction(alpha)

    def inverse(self, x) -> mpf:
        """Positive ``y`` with ``g(y) = x`` (bisection on ``[0, max(1, x)]``)."""
        x = to_big(x)
        if x <= 0:
            raise DomainError(f"inverse needs x > 0, got {x}")
        # Relative tolerance: the root can be as small as ~sqrt(x).
        tol = mpf(2) ** (-(mp.prec // 2)) * min(mpf(1), mp.sqrt(x))
        try:
            return bisect_root(lambda y: self.g(y) - x, 0, max(mpf(1), x), tol=tol)
        except BracketInvalid as exc:
            raise InversionFailed(str(exc)) from exc

    def inverse_derivative(self, x) -> mpf:
        """``(g^{-1})'(x) = 1 / g'(g^{-1}(x))``."""
        return 1 / self.dg(self.inverse(x))

    def __call__(self, x) -> mpf:
        return density_g(self, x)


def density_g(pd: EvenPolyDensity, x) -> mpf:
    x = to_big(x)
    if x <= 0:
        raise DomainError(f"density_g is defined for x > 0, got {x}")
    y = pd.inverse(x)
    return 2 * density_w_alpha(pd.alpha, y) / pd.dg(y)


def x2_plus_x2d(d: int) -> Polynomial:
    """``x^2 + x^(2d)``."""
    return Polynomial.univariate({2: 1, 2 * d: 1})


# ---------------------------------------------------------------------------
# Density sandwich report
# ---------------------------------------------------------------------------


def log_grid(lo, hi, count: int) -> list[mpf]:
    """``count`` log-spaced points from ``lo`` to ``hi`` inclusive."""
    lo, hi = to_big(lo), to_big(hi)
    if count < 2:
        return [hi]
    a, b = mp.log(lo), mp.log(hi)
    inner = [mp.exp(a + (b - a) * i / (count - 1)) for i in range(1, count - 1)]
    return [lo] + inner + [hi]


@dataclass
class DensityCompareReport:
    """Empirical sandwich constants between ``g_# Gamma_alpha`` and ``f_# Gamma_beta``.

    ``c1`` is the minimum of ``f_#w_beta / g_#w_alpha`` over grid points in
    ``(0, 1]``; ``c2`` is the minimum of ``g_#w_alpha / f_#w_beta`` over the
    whole grid. The ``*_ok`` flags record whether the intermediate
    inequalities used to bound ``g_#w_alpha`` hold at every grid point.
    """

    alpha: Fraction
    beta: Fraction
    d: int | None
    g: Polynomial
    grid_lo: mpf
    grid_hi: mpf
    grid_points: int
    c1: mpf
    c1_argmin: mpf
    c2: mpf
    c2_argmin: mpf
    delta: mpf | None
    beta_condition: bool | None
    inverse_bracket_ok: bool
    inverse_deriv_bracket_ok: bool
    outer_deriv_bound_ok: bool
    interval_density_bracket_ok: bool
    tail_ratio_increasing: bool
    rows: list[tuple[mpf, mpf, mpf, mpf]] = field(repr=False, default_factory=list)


def density_compare_report(
    alpha,
    d: int,
    beta,
    grid: Sequence | None = None,
    *,
    g: Polynomial | None = None,
    grid_lo="1e-6",
    grid_hi="1e6",
    grid_points: int = 2000,
    precision_bits: int = 128,
) -> DensityCompareReport:
    """Evaluate both push-forward densities on a grid and extract ``c1``, ``c2``.

    ``g`` defaults to ``x^2 + x^(2d)``; passing ``g`` explicitly skips the
    ``d > alpha`` and ``beta`` checks (used for degenerate comparisons such
    as ``g = x^2``). ``grid`` overrides the log-spaced default.
    """
    alpha_q, beta_q = to_fraction(alpha), to_fraction(beta)
    explicit_g = g is not None
    if not explicit_g:
        if not d > alpha_q:
            raise ValueError(f"need d > alpha, got d={d}, alpha={alpha_q}")
        if not 0 < beta_q < 1:
            raise ValueError(f"beta must lie in (0, 1), got {beta_q}")
        g = x2_plus_x2d(d)
    with working_precision(precision_bits):
        pd = EvenPolyDensity(g, alpha_q)
        xs = [to_big(x) for x in grid] if grid is not None else log_grid(grid_lo, grid_hi, grid_points)
        if any(x <= 0 for x in xs):
            raise DomainError("grid points must be positive")
        xs = sorted(xs)
        one = mpf(1)
        a, b = to_big(alpha_q), to_big(beta_q)
        calpha = normalizing_constant(alpha_q)

        delta = beta_condition = None
        if not explicit_g:
            delta = (a / (2 * d) + mpf(1) / 2) / 2
            beta_condition = bool(b / 2 > mpf(1) / 2 - delta)

        rows = []
        c1 = c2 = mp.inf
        c1_at = c2_at = None
        inv_ok = deriv_ok = outer_ok = dens_ok = True
        for x in xs:
            y = pd.inverse(x)
            gd = 2 * density_w_alpha(alpha_q, y) / pd.dg(y)
            fd = density_f_sq(beta_q, x)
            r1 = fd / gd
            r2 = gd / fd
            rows.append((x, gd, fd, r2))
            if r2 < c2:
                c2, c2_at = r2, x
            if x <= one:
                if r1 < c1:
                    c1, c1_at = r1, x
                if not explicit_g:
                    sx = mp.sqrt(x)
                    inv_ok &= bool(sx / 2 <= y <= sx)
                    dinv = 1 / pd.dg(y)
                    deriv_ok &= bool(1 / ((2 * d + 2) * sx) <= dinv <= 1 / sx)
                    dens_ok &= bool(2 * calpha / ((2 * d + 2) * mp.e * sx) <= gd <= 2 * calpha / sx)
            elif not explicit_g:
                dinv = 1 / pd.dg(y)
                outer_ok &= bool(y <= x ** (mpf(1) / (2 * d)) and dinv >= 1 / ((2 * d + 2) * x))

        top = [row for row in rows if row[0] >= xs[-1] / 10]
        tail_inc = all(top[i + 1][3] >= top[i][3] for i in range(len(top) - 1)) if len(top) > 1 else True

        return DensityCompareReport(
            alpha=alpha_q,
            beta=beta_q,
            d=None if explicit_g else d,
            g=g,
            grid_lo=xs[0],
            grid_hi=xs[-1],
            grid_points=len(xs),
            c1=c1 if c1_at is not None else mpf("nan"),
            c1_argmin=c1_at,
            c2=c2,
            c2_argmin=c2_at,
            delta=delta,
            beta_condition=beta_condition,
            inverse_bracket_ok=bool(inv_ok),
            inverse_deriv_bracket_ok=bool(deriv_ok),
            outer_deriv_bound_ok=bool(outer_ok),
            interval_density_bracket_ok=bool(dens_ok),
            tail_ratio_increasing=tail_inc,
            rows=rows,
        )


__all__ = [
    "DEFAULT_DEGREE_BUDGET",
    "DegreeBudgetExceeded",
    "InversionFailed",
    "PushforwardMoments",
    "pf_moment",
    "density_f_sq",
    "EvenPolyDensity",
    "density_g",
    "x2_plus_x2d",
    "log_grid",
    "DensityCompareReport",
    "density_compare_report",
]
