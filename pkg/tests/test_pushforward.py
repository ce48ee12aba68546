import functools
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from oracles import bisection_oracle, cdf_derivative, pushforward_cdf_even
from sosub.measures import GammaAlpha, MomentSequence, UniformBox, normalizing_constant
from sosub.numerics import DomainError, SymMatrix, cholesky, working_precision
from sosub.polyring import Polynomial, parse_poly
from sosub.pushforward import (
    DegreeBudgetExceeded,
    EvenPolyDensity,
    PushforwardMoments,
    density_compare_report,
    density_f_sq,
    density_g,
    log_grid,
    pf_moment,
    x2_plus_x2d,
)

X = Polynomial.variable(0)
X2 = Polynomial.univariate({2: 1})
G = Polynomial.univariate({2: 1, 6: 1})


def gaussian(bits=256, n=1):
    return MomentSequence(GammaAlpha(2, n), bits)


@pytest.mark.parametrize(
    "f, k, expected",
    [(X, 2, Fraction(1, 2)), (X2, 1, Fraction(1, 2)), (X2, 2, Fraction(3, 4)), (X2, 0, 1), (G, 1, Fraction(19, 8))],
)
def test_pf_moment_examples(f, k, expected):
    pm = PushforwardMoments(f, gaussian())
    expected = Fraction(expected)
    with working_precision(256):
        assert abs(pf_moment(pm, k) - mpf(expected.numerator) / expected.denominator) < mpf(10) ** -60


@pytest.mark.parametrize("spec", [GammaAlpha(2), GammaAlpha(Fraction(1, 2)), UniformBox(((-1, 2),))], ids=str)
def test_identity_pushforward_preserves_moments(spec):
    base = MomentSequence(spec, 256)
    pm = PushforwardMoments(X, base)
    for k in range(21):
        assert pm.moment(k) == base.moment(k)


def test_pf_moments_nonnegative_for_nonnegative_f():
    pm = PushforwardMoments(G, gaussian())
    assert all(m > 0 for m in pm.moments(20))


@pytest.mark.parametrize("f", [G, X2, Polynomial.univariate({6: 1}), X], ids=str)
def test_hankel_positive_definite_up_to_15(f):
    pm = PushforwardMoments(f, gaussian(512))
    with working_precision(512):
        for size in range(1, 16):
            cholesky(SymMatrix.from_function(size, lambda i, j: pm.moment(i + j)))


def test_degree_budget():
    pm = PushforwardMoments(G, gaussian(), degree_budget=30)
    pm.moment(5)
    with pytest.raises(DegreeBudgetExceeded):
        pm.moment(6)


def test_deepest_table_moment_fits_default_budget():
    # ubpf at r=14 needs pf(29), degree 174.
    pm = PushforwardMoments(G, gaussian(128))
    assert pm.moment(29) > 0


# -- closed-form density of x^2 -------------------------------------------


@pytest.mark.parametrize("beta", ["2", "0.9"])
def test_density_f_sq_at_one_matches_cdf_derivative(beta):
    with working_precision(192):
        got = density_f_sq(beta, 1)
        expected = normalizing_constant(beta) / mp.e
        assert abs(got - expected) < mpf(10) ** -50
        cdf = pushforward_cdf_even(mp.sqrt, beta)
        assert abs(got / cdf_derivative(cdf, 1) - 1) < mpf(10) ** -20


def test_density_f_sq_beta_two_closed_form():
    with working_precision(192):
        assert abs(density_f_sq(2, 1) - 1 / (mp.e * mp.sqrt(mp.pi))) < mpf(10) ** -50


@pytest.mark.parametrize("beta", ["0.5", "0.9", "0.95", "2"])
def test_density_f_sq_normalized(beta):
    with working_precision(128):
        total = mp.quad(lambda x: density_f_sq(beta, x), [0, 1, 100, mp.inf])
        assert abs(total - 1) < mpf(10) ** -20


@pytest.mark.parametrize("x", [0, -1])
def test_density_f_sq_domain(x):
    with pytest.raises(DomainError):
        density_f_sq(2, x)


# -- numeric density of g ---------------------------------------------------


def test_density_g_reduces_to_closed_form():
    with working_precision(160):
        pd = EvenPolyDensity(X2, 2)
        for x in ["1", "0.01", "7.5"]:
            assert abs(density_g(pd, x) / density_f_sq(2, x) - 1) < mpf(10) ** -20


def test_density_g_at_two_for_x2_plus_x6():
    with working_precision(192):
        pd = EvenPolyDensity(G, 2)
        expected = normalizing_constant(2) / (4 * mp.e)
        got = density_g(pd, 2)
        assert abs(got / expected - 1) < mpf(10) ** -25

        def inverse(x):
            bits = mp.prec + 20
            return bisection_oracle(lambda y: G(y) - x, 0, max(1, x), bits=bits, iters=bits)

        cdf = pushforward_cdf_even(inverse, 2, bits=192)
        assert abs(got / cdf_derivative(cdf, 2) - 1) < mpf(10) ** -15


def test_inverse_at_one():
    with working_precision(256):
        y = EvenPolyDensity(G, 2).inverse(1)
        assert mpf("0.5") <= y <= 1
        assert abs(y - bisection_oracle(lambda t: G(t) - 1, 0, 1)) < mpf(2) ** -120
        assert mp.nstr(y, 3) == "0.826"


def test_density_g_normalization_grows_to_one():
    with working_precision(96):
        pd = EvenPolyDensity(G, 2)
        pts = [0, 1, 2, 100, 10**4, 10**6]
        partial = [mp.quad(pd, pts[: i + 1]) for i in range(1, len(pts))]
        assert all(a < b for a, b in zip(partial, partial[1:]))
        assert abs(partial[-1] - 1) < mpf(10) ** -12


def test_density_g_moments_match_pf_moments():
    # Quadrature of x^k g_#w in the image variable vs the moment route.
    pm = PushforwardMoments(G, gaussian(128))
    with working_precision(96):
        # Same tanh-sinh nodes for every k, so evaluate the density once per node.
        pd = functools.lru_cache(maxsize=None)(EvenPolyDensity(G, 2))
        cuts = [mpf(0)] + [G(mpf(y)) for y in ("0.5", "1", "2", "4", "8", "12")]
        for k in range(7):
            num = mp.quad(lambda x: x**k * pd(x), cuts)
            assert abs(num / pm.moment(k) - 1) < mpf(10) ** -10, k


def test_density_g_interval_bracket():
    d = 3
    with working_precision(128):
        pd = EvenPolyDensity(x2_plus_x2d(d), 2)
        c = normalizing_constant(2)
        for x in log_grid("1e-6", 1, 200):
            val = density_g(pd, x)
            sx = mp.sqrt(x)
            assert 2 * c / ((2 * d + 2) * mp.e * sx) <= val <= 2 * c / sx


@pytest.mark.parametrize("g", ["x1^3 + x1^2", "x1^2 - x1^4", "x1^2 + 1", "0"])
def test_even_poly_density_rejects(g):
    with pytest.raises(ValueError):
        EvenPolyDensity(parse_poly(g, 1), 2)


# -- density comparison report ----------------------------------------------


def test_log_grid_endpoints_exact():
    with working_precision(128):
        xs = log_grid("1e-6", "1e6", 13)
        assert xs[0] == mpf("1e-6") and xs[-1] == mpf("1e6")
        assert abs(xs[6] - 1) < mpf(10) ** -30
        assert all(a < b for a, b in zip(xs, xs[1:]))


def test_report_small_grid_positive_constants():
    rep = density_compare_report(2, 3, "0.95", grid_points=240)
    assert rep.c1 > 0 and rep.c2 > 0
    assert 0 < rep.c1_argmin <= 1
    assert rep.beta_condition
    with working_precision(128):
        assert abs(rep.delta - (mpf(1) / 3 + mpf(1) / 2) / 2) < mpf(10) ** -30
    assert rep.inverse_bracket_ok and rep.inverse_deriv_bracket_ok
    assert rep.outer_deriv_bound_ok and rep.interval_density_bracket_ok
    assert rep.tail_ratio_increasing
    assert len(rep.rows) == 240


def test_report_degenerate_identical_densities():
    # The inverse is only resolved to half the working precision.
    rep = density_compare_report(2, 1, 2, g=X2, grid_points=120)
    with working_precision(128):
        assert abs(rep.c1 - 1) < mpf(10) ** -15
        assert abs(rep.c2 - 1) < mpf(10) ** -15


def test_report_explicit_grid():
    rep = density_compare_report(2, 3, "0.95", grid=["0.5", "0.01", "3", "1"])
    assert rep.grid_points == 4
    with working_precision(128):
        assert rep.grid_lo == mpf("0.01")


@pytest.mark.parametrize("alpha, d, beta", [(2, 2, "0.95"), (3, 3, "0.95"), (2, 3, "1.5"), (2, 3, "0")])
def test_report_rejects_bad_parameters(alpha, d, beta):
    with pytest.raises(ValueError):
        density_compare_report(alpha, d, beta, grid_points=10)
