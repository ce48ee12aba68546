"""Sparse multivariate polynomials with mpf coefficients.

Monomials are exponent tuples. Anything that enumerates monomials uses
graded-lex order: total degree first, then lexicographic with ``x1`` largest,
so the univariate basis is ``1, x, x^2, ...`` and the bivariate one starts
``1, x1, x2, x1^2, x1*x2, x2^2``.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Mapping, Sequence

from mpmath import mp, mpf

from .numerics import to_big

MultiIndex = tuple[int, ...]


class PolynomialError(ValueError):
    pass


class VarMismatch(PolynomialError):
    pass


class DimMismatch(PolynomialError):
    pass


class ZeroScale(PolynomialError):
    pass


class ParseError(PolynomialError):
    pass


def grlex_key(idx: MultiIndex) -> tuple:
    return (sum(idx), tuple(-e for e in idx))


def monomials_up_to(n_vars: int, degree: int) -> list[MultiIndex]:
    """All exponent tuples of total degree <= ``degree`` in graded-lex order."""
    out = []
    for d in range(degree + 1):
        out.extend(_monomials_of_degree(n_vars, d))
    return out


def _monomials_of_degree(n: int, d: int) -> list[MultiIndex]:
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


def add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(x + y for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial in ``n_vars`` variables.

    Zero coefficients are never stored; the zero polynomial has
    ``degree() == -math.inf``.
    """

    __slots__ = ("n_vars", "_terms", "_hash")

    def __init__(self, n_vars: int, terms: Mapping[MultiIndex, object] | Iterable = ()):
        if n_vars < 1:
            raise ValueError("n_vars must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[MultiIndex, mpf] = {}
        for idx, c in items:
            idx = tuple(int(e) for e in idx)
            if len(idx) != n_vars or any(e < 0 for e in idx):
                raise VarMismatch(f"bad exponent tuple {idx} for {n_vars} variables")
            c = to_big(c)
            if c != 0:
                clean[idx] = clean.get(idx, mpf(0)) + c
        self.n_vars = n_vars
        self._terms = {k: v for k, v in clean.items() if v != 0}
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, n_vars: int = 1) -> "Polynomial":
        return cls(n_vars, {(0,) * n_vars: c})

    @classmethod
    def variable(cls, i: int, n_vars: int = 1) -> "Polynomial":
        """The coordinate polynomial ``x_{i+1}`` (``i`` zero-based)."""
        idx = [0] * n_vars
        idx[i] = 1
        return cls(n_vars, {tuple(idx): 1})

    @classmethod
    def univariate(cls, coeffs: Mapping[int, object] | Sequence) -> "Polynomial":
        """Build from ``{degree: coeff}`` or a dense coefficient list (constant first)."""
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        return cls(1, {(d,): c for d, c in items})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict[MultiIndex, mpf]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: grlex_key(kv[0]))

    def coeff(self, idx: MultiIndex) -> mpf:
        return self._terms.get(tuple(idx), mpf(0))

    def degree(self):
        if not self._terms:
            return -math.inf
        return max(sum(idx) for idx in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float)):
            other = Polynomial.constant(other, self.n_vars)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n_vars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({format_poly(self)!r}, n_vars={self.n_vars})"

    def __str__(self) -> str:
        return format_poly(self)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise VarMismatch(f"{self.n_vars} vs {other.n_vars} variables")
            return other
        return Polynomial.constant(other, self.n_vars)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        terms = dict(self._terms)
        for idx, c in other._terms.items():
            terms[idx] = terms.get(idx, mpf(0)) + c
        return Polynomial(self.n_vars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.n_vars, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        return poly_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        return poly_pow(self, k)

    def __call__(self, *point) -> mpf:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return poly_eval(self, point)


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.n_vars != q.n_vars:
        raise VarMismatch(f"{p.n_vars} vs {q.n_vars} variables")
    out: dict[MultiIndex, mpf] = {}
    for a, ca in p._terms.items():
        for b, cb in q._terms.items():
            idx = add_index(a, b)
            out[idx] = out.get(idx, mpf(0)) + ca * cb
    return Polynomial(p.n_vars, out)


def poly_pow(p: Polynomial, k: int) -> Polynomial:
    if k < 0:
        raise ValueError("exponent must be non-negative")
    result = Polynomial.constant(1, p.n_vars)
    base = p
    while k:
        if k & 1:
            result = poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


def poly_eval(p: Polynomial, point: Sequence) -> mpf:
    if len(point) != p.n_vars:
        raise DimMismatch(f"point has {len(point)} coordinates, polynomial has {p.n_vars} variables")
    xs = [to_big(x) for x in point]
    if p.n_vars == 1 and p._terms:
        # Horner over the dense coefficient list.
        deg = int(p.degree())
        acc = mpf(0)
        x = xs[0]
        for d in range(deg, -1, -1):
            acc = acc * x + p._terms.get((d,), 0)
        return acc
    total = mpf(0)
    for idx, c in p._terms.items():
        term = c
        for x, e in zip(xs, idx):
            if e:
                term *= x ** e
        total += term
    return total


def derivative(p: Polynomial, var: int = 0) -> Polynomial:
    """Partial derivative with respect to ``x_{var+1}``."""
    out = {}
    for idx, c in p._terms.items():
        e = idx[var]
        if e:
            new = list(idx)
            new[var] = e - 1
            out[tuple(new)] = c * e
    return Polynomial(p.n_vars, out)


def scale_variables(p: Polynomial, c) -> Polynomial:
    """``q(x) = p(c x)``: each coefficient picks up ``c**|alpha|``."""
    c = to_big(c)
    if c == 0:
        raise ZeroScale("scale factor must be nonzero")
    return Polynomial(p.n_vars, {idx: coef * c ** sum(idx) for idx, coef in p._terms.items()})


def compose_univariate(s: Polynomial, f: Polynomial) -> Polynomial:
    """``s(f(x))`` for univariate ``s`` and any ``f``."""
    if s.n_vars != 1:
        raise VarMismatch("outer polynomial must be univariate")
    result = Polynomial(f.n_vars)
    if s.is_zero():
        return result
    # Horner in f.
    for d in range(int(s.degree()), -1, -1):
        result = poly_mul(result, f) + s.coeff((d,))
    return result


def embed(p: Polynomial, n_vars: int) -> Polynomial:
    """View ``p`` as a polynomial in ``n_vars >= p.n_vars`` variables (extra ones unused)."""
    if n_vars < p.n_vars:
        raise VarMismatch("cannot embed into fewer variables")
    pad = (0,) * (n_vars - p.n_vars)
    return Polynomial(n_vars, {idx + pad: c for idx, c in p._terms.items()})


# ---------------------------------------------------------------------------
# Text form: "x1^2 + 3.5*x1^4*x2"
# ---------------------------------------------------------------------------

_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_FACTOR_RE = re.compile(rf"^(?:(?P<num>{_NUMBER})|x(?P<var>\d*)(?:\^(?P<exp>\d+))?)$")


def parse_poly(text: str, n_vars: int | None = None) -> Polynomial:
    """Parse ``"x1^2 + 3.5*x1^4*x2"``. A bare ``x`` means ``x1``.

    ``n_vars`` defaults to the largest variable index that appears (at least 1).
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError("empty polynomial")
    s = s.replace("**", "^")
    # Split into signed terms without breaking exponents like 1e-5.
    pieces = re.findall(r"[+-]?(?:[^+-]|(?<=[eE])[+-])+", s)
    if "".join(pieces) != s:
        raise ParseError(f"cannot parse {text!r}")
    parsed: list[tuple[mpf, dict[int, int]]] = []
    max_var = 1
    for piece in pieces:
        sign = 1
        body = piece
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise ParseError(f"dangling sign in {text!r}")
        coeff = mpf(sign)
        powers: dict[int, int] = {}
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor)
            if m is None:
                raise ParseError(f"bad factor {factor!r} in {text!r}")
            if m.group("num") is not None:
                coeff *= mpf(m.group("num"))
            else:
                var = int(m.group("var")) if m.group("var") else 1
                if var < 1:
                    raise ParseError("variables are numbered from x1")
                max_var = max(max_var, var)
                exp = int(m.group("exp")) if m.group("exp") else 1
                powers[var] = powers.get(var, 0) + exp
        parsed.append((coeff, powers))
    if n_vars is None:
        n_vars = max_var
    elif max_var > n_vars:
        raise VarMismatch(f"{text!r} uses x{max_var} but only {n_vars} variables are declared")
    terms: dict[MultiIndex, mpf] = {}
    for coeff, powers in parsed:
        idx = tuple(powers.get(i + 1, 0) for i in range(n_vars))
        terms[idx] = terms.get(idx, mpf(0)) + coeff
    return Polynomial(n_vars, terms)


def _format_coeff(c: mpf, digits: int) -> str:
    if c == int(c) and abs(c) < mpf(10) ** digits:
        return str(int(c))
    return mp.nstr(c, digits, min_fixed=-4, max_fixed=digits)


def format_poly(p: Polynomial, digits: int = 17) -> str:
    """Inverse of :func:`parse_poly` (coefficients printed to ``digits`` significant digits)."""
    if p.is_zero():
        return "0"
    chunks = []
    for idx, c in sorted(p._terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True):
        factors = []
        for i, e in enumerate(idx):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        mag = abs(c)
        if factors and mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag, digits)] + factors)
        if not chunks:
            chunks.append(("-" if c < 0 else "") + body)
        else:
            chunks.append((" - " if c < 0 else " + ") + body)
    return "".join(chunks)


def all_even(p: Polynomial) -> bool:
    return all(e % 2 == 0 for idx in p._terms for e in idx)


def from_basis(coeffs: Sequence, basis: Sequence[MultiIndex], n_vars: int) -> Polynomial:
    """``sum_i coeffs[i] * x^basis[i]``."""
    return Polynomial(n_vars, zip(basis, coeffs))


__all__ = [
    "MultiIndex",
    "Polynomial",
    "PolynomialError",
    "VarMismatch",
    "DimMismatch",
    "ZeroScale",
    "ParseError",
    "grlex_key",
    "monomials_up_to",
    "add_index",
    "poly_mul",
    "poly_pow",
    "poly_eval",
    "derivative",
    "scale_variables",
    "compose_univariate",
    "embed",
    "parse_poly",
    "format_poly",
    "all_even",
    "from_basis",
]
