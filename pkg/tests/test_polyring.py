import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mpf

from sosub.numerics import working_precision
from sosub.polyring import (
    DimMismatch,
    ParseError,
    Polynomial,
    VarMismatch,
    ZeroScale,
    compose_univariate,
    derivative,
    embed,
    format_poly,
    monomials_up_to,
    parse_poly,
    poly_eval,
    poly_mul,
    poly_pow,
    scale_variables,
)

X = Polynomial.variable(0)
ONE = Polynomial.constant(1)


def test_mul_difference_of_squares():
    assert poly_mul(X + 1, X - 1) == Polynomial.univariate({2: 1, 0: -1})


def test_mul_monomials():
    assert poly_mul(Polynomial.univariate({2: 1}), Polynomial.univariate({6: 1})) == Polynomial.univariate({8: 1})


def test_square_of_x2_plus_x6():
    g = Polynomial.univariate({2: 1, 6: 1})
    assert poly_mul(g, g) == Polynomial.univariate({4: 1, 8: 2, 12: 1})


def test_mul_var_mismatch():
    with pytest.raises(VarMismatch):
        poly_mul(X, Polynomial.variable(0, 2))


@pytest.mark.parametrize(
    "p, k, expected",
    [
        (Polynomial.univariate({2: 1, 6: 1}), 0, ONE),
        (Polynomial.univariate({2: 1}), 3, Polynomial.univariate({6: 1})),
        (Polynomial.univariate({2: 1, 6: 1}), 2, Polynomial.univariate({4: 1, 8: 2, 12: 1})),
    ],
)
def test_pow(p, k, expected):
    assert poly_pow(p, k) == expected


@pytest.mark.parametrize("x, expected", [(1, 2), (0, 0), (2, 68)])
def test_eval(x, expected):
    assert poly_eval(Polynomial.univariate({2: 1, 6: 1}), [x]) == expected


def test_eval_dim_mismatch():
    with pytest.raises(DimMismatch):
        poly_eval(X, [1, 2])


@pytest.mark.parametrize(
    "p, c, expected",
    [
        (Polynomial.univariate({2: 1}), 2, Polynomial.univariate({2: 4})),
        (Polynomial.univariate({2: 1, 6: 1}), 1, Polynomial.univariate({2: 1, 6: 1})),
        (X + 1, 3, Polynomial.univariate({1: 3, 0: 1})),
    ],
)
def test_scale_variables(p, c, expected):
    assert scale_variables(p, c) == expected


def test_scale_zero():
    with pytest.raises(ZeroScale):
        scale_variables(X, 0)


def test_zero_polynomial():
    z = Polynomial(2)
    assert z.degree() == -math.inf
    assert z.is_zero()
    assert (X - X).is_zero()
    assert len(X - X) == 0


def test_no_zero_coefficients_stored():
    p = Polynomial(1, {(0,): 0, (3,): 2})
    assert p.terms == {(3,): 2}


def test_grlex_basis_order():
    assert monomials_up_to(1, 3) == [(0,), (1,), (2,), (3,)]
    assert monomials_up_to(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert len(monomials_up_to(3, 4)) == math.comb(3 + 4, 4)


def test_derivative_and_compose():
    g = Polynomial.univariate({2: 1, 6: 1})
    assert derivative(g) == Polynomial.univariate({1: 2, 5: 6})
    s = Polynomial.univariate({0: 1, 1: 2})
    assert compose_univariate(s, g) == Polynomial.univariate({0: 1, 2: 2, 6: 2})


def test_embed():
    p = embed(Polynomial.univariate({2: 1}), 3)
    assert p.n_vars == 3 and p.terms == {(2, 0, 0): 1}


# -- text form ------------------------------------------------------------


def test_parse_example():
    p = parse_poly("x1^2 + 3.5*x1^4*x2")
    assert p.n_vars == 2
    assert p.terms == {(2, 0): 1, (4, 1): mpf("3.5")}


@pytest.mark.parametrize(
    "text, terms",
    [
        ("7", {(0,): 7}),
        ("x^2+x^6", {(2,): 1, (6,): 1}),
        (" x1 ^ 2 -  2 * x1 ", {(2,): 1, (1,): -2}),
        ("-x1", {(1,): -1}),
        ("1e-3*x1^2", {(2,): mpf("1e-3")}),
        ("x1*x1", {(2,): 1}),
        ("x1 - x1", {}),
    ],
)
def test_parse_variants(text, terms):
    assert parse_poly(text, 1).terms == terms


@pytest.mark.parametrize("text", ["", "x1^", "x1^^2", "2**", "y", "x0", "3x1", "x1 +"])
def test_parse_errors(text):
    with pytest.raises((ParseError, VarMismatch)):
        parse_poly(text)


def test_parse_too_many_vars():
    with pytest.raises(VarMismatch):
        parse_poly("x2", 1)


def test_format_round_trip():
    for text in ["x1^6 + x1^2", "-x1^2 + 7", "3.5*x1^4*x2 + x1^2", "0"]:
        p = parse_poly(text, 2)
        assert parse_poly(format_poly(p), 2) == p


# -- properties -----------------------------------------------------------

small_coeff = st.integers(-5, 5)
univariate_polys = st.dictionaries(st.integers(0, 6), small_coeff, max_size=5).map(Polynomial.univariate)
bivariate_polys = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), small_coeff, max_size=5
).map(lambda d: Polynomial(2, d))


@settings(max_examples=60, deadline=None)
@given(univariate_polys, st.integers(0, 6))
def test_pow_is_repeated_mul(p, k):
    expected = ONE
    for _ in range(k):
        expected = poly_mul(expected, p)
    assert poly_pow(p, k) == expected


@settings(max_examples=60, deadline=None)
@given(bivariate_polys, bivariate_polys, st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
def test_eval_is_multiplicative(p, q, pt):
    with working_precision(128):
        point = [Fraction(pt[0], 3), Fraction(pt[1], 7)]
        lhs = poly_eval(poly_mul(p, q), point)
        rhs = poly_eval(p, point) * poly_eval(q, point)
        assert abs(lhs - rhs) <= mpf(2) ** -100 * max(1, abs(rhs))


@settings(max_examples=60, deadline=None)
@given(bivariate_polys, st.integers(-6, 6))
def test_scale_inverse_exact_for_powers_of_two(p, e):
    c = mpf(2) ** e
    assert scale_variables(scale_variables(p, c), 1 / c) == p
