"""Measure-based and push-forward upper bounds via symmetric pencils.

With ``sigma = sum_l p_l^2`` and each ``p_l = sum_a u_a x^a``, the program

    min { int f sigma dmu : int sigma dmu = 1, sigma SOS of degree <= 2r }

has objective ``sum_l u_l^T A u_l`` and constraint ``sum_l u_l^T M u_l = 1``,
where ``M`` is the moment matrix and ``A`` the localizing matrix of ``f``. The
minimum of a ratio of two such sums is attained by a single term, so the bound
is the smallest generalized eigenvalue of ``(A, M)`` and the optimal density is
the square of the matching eigenvector polynomial.

The push-forward bound is the same construction on the real line with the
moments of ``f_# mu``: a Hankel matrix ``M(i, j) = m_{i+j}`` against the
shifted Hankel matrix ``A(i, j) = m_{i+j+1}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

from mpmath import mp, mpf

from . import numerics
from .measures import MeasureSpec, MomentSequence, integrate_poly
from .numerics import NotPositiveDefinite, SymMatrix, check_precision, default_precision, working_precision
from .polyring import (
    MultiIndex,
    Polynomial,
    VarMismatch,
    add_index,
    compose_univariate,
    from_basis,
    monomials_up_to,
    poly_mul,
)
from .pushforward import DEFAULT_DEGREE_BUDGET, DegreeBudgetExceeded, PushforwardMoments

Kind = Literal["standard", "pushforward"]


class PrecisionOrDegeneracy(ArithmeticError):
    """The moment matrix is not numerically positive definite.

    Either the measure is degenerate for this basis or the working precision
    (already doubled once) is too low for its conditioning.
    """

    def __init__(self, pivot_index: int, precision_bits: int):
        self.pivot_index = pivot_index
        self.precision_bits = precision_bits
        super().__init__(
            f"moment matrix not positive definite at pivot {pivot_index} "
            f"(precision {precision_bits} bits)"
        )


@dataclass
class MomentMatrix:
    basis: list[MultiIndex]
    M: SymMatrix

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass
class LocalizingMatrix:
    basis: list[MultiIndex]
    A: SymMatrix


@dataclass
class Diagnostics:
    precision_bits: int
    cholesky_min_pivot: mpf
    eig_residual: mpf
    whitened_residual: mpf
    retried: bool = False


@dataclass
class BoundResult:
    """Value of one bound plus the optimal density that certifies it.

    ``sigma = root**2`` is normalized so that ``int sigma dmu = 1``. For
    push-forward bounds ``s`` is the univariate density on the image of ``f``
    and ``sigma = s(f)``.
    """

    kind: Kind
    value: mpf
    level_r: int
    sigma: Polynomial
    root: Polynomial
    diagnostics: Diagnostics
    f: Polynomial
    measure: MeasureSpec
    s: Polynomial | None = None
    s_root: Polynomial | None = None

    def __float__(self) -> float:
        return float(self.value)


# ---------------------------------------------------------------------------
# Matrix assembly
# ---------------------------------------------------------------------------


def moment_matrix(seq: MomentSequence, r: int) -> MomentMatrix:
    basis = monomials_up_to(seq.n_vars, r)
    with working_precision(seq.precision_bits):
        m = SymMatrix.from_function(len(basis), lambda i, j: seq.moment(add_index(basis[i], basis[j])))
    return MomentMatrix(basis, m)


def localizing_matrix(seq: MomentSequence, f: Polynomial, r: int) -> LocalizingMatrix:
    if f.n_vars != seq.n_vars:
        raise VarMismatch(f"f has {f.n_vars} variables, measure has {seq.n_vars}")
    basis = monomials_up_to(seq.n_vars, r)
    terms = f.items()

    def entry(i: int, j: int) -> mpf:
        ab = add_index(basis[i], basis[j])
        return mp.fsum(c * seq.moment(add_index(ab, idx)) for idx, c in terms)

    with working_precision(seq.precision_bits):
        a = SymMatrix.from_function(len(basis), entry)
    return LocalizingMatrix(basis, a)


def hankel_pair(pm: PushforwardMoments, r: int) -> tuple[SymMatrix, SymMatrix]:
    """``(M, A)`` with ``M(i,j) = m_{i+j}`` and ``A(i,j) = m_{i+j+1}``, size ``r+1``."""
    with working_precision(pm.precision_bits):
        ms = pm.moments(2 * r + 2)
        m = SymMatrix.from_function(r + 1, lambda i, j: ms[i + j])
        a = SymMatrix.from_function(r + 1, lambda i, j: ms[i + j + 1])
    return m, a


# ---------------------------------------------------------------------------
# Pencil solve
# ---------------------------------------------------------------------------


@dataclass
class PencilSolution:
    value: mpf
    coeffs: list[mpf]
    min_pivot: mpf
    residual: mpf
    whitened_residual: mpf


def solve_pencil(a: SymMatrix, m: SymMatrix) -> PencilSolution:
    """Smallest ``lam`` with ``A u = lam M u`` and its ``M``-normalized ``u``.

    Runs at the current mpmath precision; raises ``NotPositiveDefinite`` if
    ``M`` cannot be factored there.
    """
    low = numerics.cholesky(m)
    b = numerics.whiten(a, low)
    lam, v = numerics.sym_eig_min(b)
    whitened = numerics.eig_residual(b, lam, v)
    u = numerics.backward_solve_transpose(low, v)
    min_pivot = min(low[i][i] for i in range(len(low))) ** 2
    return PencilSolution(lam, u, min_pivot, pencil_error_bound(a, m, lam, u), whitened)


def pencil_error_bound(a: SymMatrix, m: SymMatrix, lam: mpf, u: list[mpf]) -> mpf:
    """Error scale for quadratic forms in ``u``: ``|u^T A u - lam u^T M u|`` and kin.

    ``||u||_1 ||A u - lam M u||_inf`` bounds the exact defect; the second term
    is the rounding floor of evaluating such forms (or the equivalent
    polynomial integrals) at the working precision.
    """
    n = a.dim
    au, mu_ = a.matvec(u), m.matvec(u)
    resid = max(abs(au[i] - lam * mu_[i]) for i in range(n))
    absu = [abs(x) for x in u]
    mag = mp.fsum(
        absu[i] * absu[j] * (abs(a[i, j]) + abs(lam) * abs(m[i, j])) for i in range(n) for j in range(n)
    )
    eps = mpf(2) ** (-mp.prec)
    return mp.fsum(absu) * resid + n * eps * mag


def _with_retry(build, bits: int):
    """Run ``build(bits)``; on a Cholesky failure retry once at twice the precision."""
    try:
        return build(bits), False
    except NotPositiveDefinite:
        pass
    try:
        return build(2 * bits), True
    except NotPositiveDefinite as exc:
        raise PrecisionOrDegeneracy(exc.index, 2 * bits) from exc


def _normalize(root: Polynomial, seq: MomentSequence) -> tuple[Polynomial, Polynomial]:
    sigma = poly_mul(root, root)
    mass = integrate_poly(seq, sigma)
    scale = 1 / mp.sqrt(mass)
    root = root * scale
    return root, poly_mul(root, root)


def compute_ub(f: Polynomial, mu: MeasureSpec, r: int, precision_bits: int | None = None) -> BoundResult:
    """Standard upper bound: best SOS density of degree ``2r`` against ``mu``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if f.n_vars != mu.n_vars:
        raise VarMismatch(f"f has {f.n_vars} variables, measure has {mu.n_vars}")
    bits = default_precision() if precision_bits is None else check_precision(precision_bits)
    if f.degree() <= 0:
        return _constant_bound("standard", f, mu, r, bits)

    def build(prec: int):
        seq = MomentSequence(mu, prec)
        with working_precision(prec):
            mm = moment_matrix(seq, r)
            lm = localizing_matrix(seq, f, r)
            sol = solve_pencil(lm.A, mm.M)
            root, sigma = _normalize(from_basis(sol.coeffs, mm.basis, f.n_vars), seq)
        return seq, sol, root, sigma

    (seq, sol, root, sigma), retried = _with_retry(build, bits)
    diag = Diagnostics(seq.precision_bits, sol.min_pivot, sol.residual, sol.whitened_residual, retried)
    return BoundResult("standard", sol.value, r, sigma, root, diag, f, mu)


def compute_ubpf(
    f: Polynomial,
    mu: MeasureSpec,
    r: int,
    precision_bits: int | None = None,
    degree_budget: int = DEFAULT_DEGREE_BUDGET,
) -> BoundResult:
    """Push-forward upper bound: densities restricted to ``s(f)`` with ``s`` univariate SOS."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if f.n_vars != mu.n_vars:
        raise VarMismatch(f"f has {f.n_vars} variables, measure has {mu.n_vars}")
    bits = default_precision() if precision_bits is None else check_precision(precision_bits)
    needed = max(f.degree(), 0) * (2 * r + 1)
    if needed > degree_budget:
        raise DegreeBudgetExceeded(f"f^{2 * r + 1} has degree {needed}, above the budget of {degree_budget}")
    if f.degree() <= 0:
        return _constant_bound("pushforward", f, mu, r, bits)

    def build(prec: int):
        seq = MomentSequence(mu, prec)
        pm = PushforwardMoments(f, seq, degree_budget)
        with working_precision(prec):
            m, a = hankel_pair(pm, r)
            sol = solve_pencil(a, m)
            s_root = Polynomial.univariate(sol.coeffs)
            root = compose_univariate(s_root, f)
            mass = integrate_poly(seq, poly_mul(root, root))
            scale = 1 / mp.sqrt(mass)
            s_root = s_root * scale
            root = root * scale
            sigma = poly_mul(root, root)
        return seq, sol, s_root, root, sigma

    (seq, sol, s_root, root, sigma), retried = _with_retry(build, bits)
    with working_precision(seq.precision_bits):
        s = poly_mul(s_root, s_root)
    diag = Diagnostics(seq.precision_bits, sol.min_pivot, sol.residual, sol.whitened_residual, retried)
    return BoundResult("pushforward", sol.value, r, sigma, root, diag, f, mu, s=s, s_root=s_root)


def _constant_bound(kind: Kind, f: Polynomial, mu: MeasureSpec, r: int, bits: int) -> BoundResult:
    """Constant ``f``: every density gives ``f`` itself, so ``sigma = 1`` is optimal.

    Handled directly because ``f_# mu`` is then a point mass whose Hankel
    matrix is singular.
    """
    with working_precision(bits):
        c = +f.coeff((0,) * f.n_vars)
        one = Polynomial.constant(1, f.n_vars)
        zero = mpf(0)
        diag = Diagnostics(bits, mpf(1), zero, zero)
    if kind == "standard":
        return BoundResult(kind, c, r, one, one, diag, f, mu)
    s_one = Polynomial.constant(1)
    return BoundResult(kind, c, r, one, one, diag, f, mu, s=s_one, s_root=s_one)


def compute_bound(f: Polynomial, mu: MeasureSpec, r: int, kind: Kind = "standard", **kw) -> BoundResult:
    if kind in ("standard", "ub"):
        return compute_ub(f, mu, r, **kw)
    if kind in ("pushforward", "ubpf"):
        return compute_ubpf(f, mu, r, **kw)
    raise ValueError(f"unknown bound kind {kind!r}")


@dataclass
class SequenceEntry:
    r: int
    result: BoundResult | None = None
    error: Exception | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None


def bound_sequence(
    f: Polynomial,
    mu: MeasureSpec,
    r_list: Iterable[int],
    kind: Kind = "standard",
    precision_bits: int | None = None,
) -> list[SequenceEntry]:
    """Compute one bound per level in ``r_list``; failures are recorded per entry."""
    levels = list(r_list)
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError(f"r_list must be strictly increasing, got {levels}")
    out = []
    for r in levels:
        try:
            out.append(SequenceEntry(r, compute_bound(f, mu, r, kind, precision_bits=precision_bits)))
        except (ArithmeticError, ValueError) as exc:
            out.append(SequenceEntry(r, error=exc))
    return out


def certificate_errors(result: BoundResult, precision_bits: int | None = None) -> tuple[mpf, mpf]:
    """``(|int sigma dmu - 1|, |int f sigma dmu - value|)`` recomputed from scratch."""
    bits = result.diagnostics.precision_bits if precision_bits is None else precision_bits
    seq = MomentSequence(result.measure, bits)
    with working_precision(bits):
        mass = integrate_poly(seq, result.sigma)
        obj = integrate_poly(seq, poly_mul(result.f, result.sigma))
        return abs(mass - 1), abs(obj - result.value)


__all__ = [
    "Kind",
    "PrecisionOrDegeneracy",
    "MomentMatrix",
    "LocalizingMatrix",
    "Diagnostics",
    "BoundResult",
    "moment_matrix",
    "localizing_matrix",
    "hankel_pair",
    "PencilSolution",
    "solve_pencil",
    "compute_ub",
    "compute_ubpf",
    "compute_bound",
    "SequenceEntry",
    "bound_sequence",
    "certificate_errors",
]
