"""Extended-precision scalar and dense linear-algebra kernels.

Reals are ``mpmath.mpf`` values. Every public routine takes an explicit
``precision_bits`` (or runs under :func:`working_precision`) so results do not
depend on whatever global mpmath precision the caller happens to have set.
"""

from __future__ import annotations

import contextlib
import functools
import os
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import mpmath
from mpmath import mp, mpf

BigReal = mpf

DEFAULT_PRECISION_BITS = 512
MIN_PRECISION_BITS = 64
PRECISION_ENV_VAR = "SOSUB_PRECISION_BITS"


class NumericsError(ArithmeticError):
    """Base class for failures in the extended-precision kernels."""


class DomainError(NumericsError, ValueError):
    pass


class NotPositiveDefinite(NumericsError):
    """Cholesky hit a non-positive pivot.

    ``index`` is the zero-based position of the first failing pivot and
    ``pivot`` the value found there.
    """

    def __init__(self, index: int, pivot=None):
        self.index = index
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite (pivot {index} = {pivot})")


class NoConvergence(NumericsError):
    pass


class BracketInvalid(NumericsError, ValueError):
    pass


def default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    return check_precision(int(raw))


def check_precision(bits: int) -> int:
    bits = int(bits)
    if bits < MIN_PRECISION_BITS:
        raise ValueError(f"precision_bits must be >= {MIN_PRECISION_BITS}, got {bits}")
    return bits


@contextlib.contextmanager
def working_precision(bits: int | None = None) -> Iterator[int]:
    """Run a block at ``bits`` of binary precision (default from env / 512)."""
    bits = default_precision() if bits is None else check_precision(bits)
    with mp.workprec(bits):
        yield bits


def to_big(x) -> mpf:
    """Convert ``x`` to an mpf at the current precision.

    Strings and Fractions are rounded once at the working precision, so
    ``to_big("0.95")`` is as accurate as the context allows (unlike going
    through a binary float first).
    """
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return mpf(x.strip())
    return mpf(x)


def to_fraction(x) -> Fraction:
    """Exact rational form of a user-supplied parameter (str, int, float, Fraction)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, mpf):
        man, exp = x.man_exp
        return Fraction(int(man)) * (Fraction(2) ** int(exp))
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


# ---------------------------------------------------------------------------
# Gamma function (Spouge)
# ---------------------------------------------------------------------------


def _spouge_terms(bits: int) -> int:
    # Spouge's relative error is below a^{-1/2} (2 pi)^{-(a+1/2)}.
    return int(bits * 0.6931471805599453 / 1.8378770664093453) + 2


@functools.lru_cache(maxsize=16)
def _spouge_coefficients(bits: int) -> tuple[int, tuple[mpf, ...]]:
    a = _spouge_terms(bits)
    # The alternating coefficients grow to about e^a, so they are formed with
    # enough guard bits to survive the cancellation in the final sum.
    guard = int(a * 1.4427) + 64
    with mp.workprec(bits + guard):
        coeffs = [mp.sqrt(2 * mp.pi)]
        fact = mpf(1)
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            c = mp.power(a - k, k - mpf(0.5)) * mp.exp(a - k) / fact
            coeffs.append(c if k % 2 == 1 else -c)
    return a, tuple(coeffs)


def gamma_fn(x, precision_bits: int | None = None) -> mpf:
    """Euler's gamma function for real ``x > 0``."""
    bits = mp.prec if precision_bits is None else check_precision(precision_bits)
    a, coeffs = _spouge_coefficients(bits)
    guard = int(a * 1.4427) + 64
    with mp.workprec(bits + guard):
        x = to_big(x)
        if x <= 0:
            raise DomainError(f"gamma_fn requires x > 0, got {x}")
        z = x - 1
        acc = coeffs[0]
        for k in range(1, a):
            acc += coeffs[k] / (z + k)
        t = z + a
        val = mp.exp((z + mpf(0.5)) * mp.log(t) - t) * acc
    return +val


# ---------------------------------------------------------------------------
# Dense symmetric matrices
# ---------------------------------------------------------------------------


class SymMatrix:
    """Dense symmetric matrix of mpf entries.

    Only the lower triangle of the input is read; the stored rows are fully
    symmetric so downstream kernels can index either way.
    """

    __slots__ = ("dim", "_rows")

    def __init__(self, rows: Sequence[Sequence]):
        dim = len(rows)
        if dim == 0:
            raise ValueError("SymMatrix needs dim >= 1")
        full = [[mpf(0)] * dim for _ in range(dim)]
        for i in range(dim):
            if len(rows[i]) < i + 1:
                raise ValueError("row too short for a square matrix")
            for j in range(i + 1):
                v = to_big(rows[i][j])
                full[i][j] = v
                full[j][i] = v
        self.dim = dim
        self._rows = full

    @classmethod
    def from_function(cls, dim: int, entry: Callable[[int, int], object]) -> "SymMatrix":
        return cls([[entry(i, j) for j in range(i + 1)] for i in range(dim)])

    def __getitem__(self, ij: tuple[int, int]) -> mpf:
        i, j = ij
        return self._rows[i][j]

    def rows(self) -> list[list[mpf]]:
        return [list(r) for r in self._rows]

    def norm_inf(self) -> mpf:
        return max(mp.fsum(abs(v) for v in row) for row in self._rows)

    def matvec(self, v: Sequence[mpf]) -> list[mpf]:
        return [mp.fdot(row, v) for row in self._rows]

    def __repr__(self) -> str:
        return f"SymMatrix(dim={self.dim})"


def cholesky(m: SymMatrix) -> list[list[mpf]]:
    """Lower-triangular ``L`` with ``L L^T = M``.

    Raises :class:`NotPositiveDefinite` with the first failing pivot.
    """
    n = m.dim
    a = m.rows()
    low = [[mpf(0)] * n for _ in range(n)]
    for j in range(n):
        s = a[j][j] - mp.fdot(low[j][:j], low[j][:j])
        if not s > 0:
            raise NotPositiveDefinite(j, s)
        d = mp.sqrt(s)
        low[j][j] = d
        for i in range(j + 1, n):
            low[i][j] = (a[i][j] - mp.fdot(low[i][:j], low[j][:j])) / d
    return low


def forward_solve(low: Sequence[Sequence[mpf]], b: Sequence[mpf]) -> list[mpf]:
    """Solve ``L x = b`` for lower-triangular ``L``."""
    n = len(low)
    x = [mpf(0)] * n
    for i in range(n):
        x[i] = (b[i] - mp.fdot(low[i][:i], x[:i])) / low[i][i]
    return x


def backward_solve_transpose(low: Sequence[Sequence[mpf]], b: Sequence[mpf]) -> list[mpf]:
    """Solve ``L^T x = b`` for lower-triangular ``L``."""
    n = len(low)
    x = [mpf(0)] * n
    for i in range(n - 1, -1, -1):
        s = b[i] - mp.fdot((low[k][i] for k in range(i + 1, n)), x[i + 1:])
        x[i] = s / low[i][i]
    return x


def whiten(a: SymMatrix, low: Sequence[Sequence[mpf]]) -> SymMatrix:
    """Return ``L^{-1} A L^{-T}`` for the Cholesky factor ``L`` of the pencil's ``M``."""
    n = a.dim
    # Y = L^{-1} A, column by column (A symmetric, so columns are rows).
    y_cols = [forward_solve(low, a._rows[j]) for j in range(n)]
    # B = Y L^{-T}  <=>  B^T = L^{-1} Y^T; rows of Y are y_cols transposed.
    b_rows = []
    for i in range(n):
        row_i = [y_cols[j][i] for j in range(n)]
        b_rows.append(forward_solve(low, row_i))
    # b_rows[i] is row i of (L^{-1} (L^{-1}A)^T)=B^T; symmetrize by averaging.
    return SymMatrix([[(b_rows[i][j] + b_rows[j][i]) / 2 for j in range(i + 1)] for i in range(n)])


def sym_eig_min(m: SymMatrix, max_sweeps: int = 60) -> tuple[mpf, list[mpf]]:
    """Smallest eigenvalue and a unit eigenvector by cyclic Jacobi rotations.

    Among equal smallest eigenvalues the first diagonal position wins.
    """
    n = m.dim
    a = m.rows()
    v = [[mpf(1) if i == j else mpf(0) for j in range(n)] for i in range(n)]
    eps = mpf(2) ** (-mp.prec)
    scale = m.norm_inf()
    if n > 1 and scale != 0:
        tol = (eps * scale) ** 2
        for _sweep in range(max_sweeps):
            off = mp.fsum(a[i][j] ** 2 for i in range(n) for j in range(i + 1, n))
            if off <= tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p][q]
                    if apq == 0 or abs(apq) <= eps * scale * eps:
                        continue
                    theta = (a[q][q] - a[p][p]) / (2 * apq)
                    t = mp.sign(theta) / (abs(theta) + mp.sqrt(theta * theta + 1)) if theta != 0 else mpf(1)
                    c = 1 / mp.sqrt(t * t + 1)
                    s = t * c
                    tau = s / (1 + c)
                    app, aqq = a[p][p], a[q][q]
                    a[p][p] = app - t * apq
                    a[q][q] = aqq + t * apq
                    a[p][q] = a[q][p] = mpf(0)
                    for k in range(n):
                        if k != p and k != q:
                            akp, akq = a[k][p], a[k][q]
                            nkp = akp - s * (akq + tau * akp)
                            nkq = akq + s * (akp - tau * akq)
                            a[k][p] = a[p][k] = nkp
                            a[k][q] = a[q][k] = nkq
                    for k in range(n):
                        vkp, vkq = v[k][p], v[k][q]
                        v[k][p] = vkp - s * (vkq + tau * vkp)
                        v[k][q] = vkq + s * (vkp - tau * vkq)
        else:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    idx = min(range(n), key=lambda i: a[i][i])
    vec = [v[k][idx] for k in range(n)]
    norm = mp.sqrt(mp.fdot(vec, vec))
    vec = [x / norm for x in vec]
    # Deterministic sign: largest-magnitude component positive.
    big = max(range(n), key=lambda k: abs(vec[k]))
    if vec[big] < 0:
        vec = [-x for x in vec]
    return a[idx][idx], vec


def eig_residual(m: SymMatrix, lam: mpf, vec: Sequence[mpf]) -> mpf:
    """``||M v - lam v||_inf``."""
    mv = m.matvec(vec)
    return max(abs(mv[i] - lam * vec[i]) for i in range(m.dim))


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


def bisect_root(h: Callable[[mpf], mpf], lo, hi, tol=None, max_iter: int = 100_000) -> mpf:
    """Root of a continuous monotone ``h`` on ``[lo, hi]`` by bisection.

    Stops once ``|h(x)| <= tol`` or the bracket is narrower than ``tol``
    (default ``2^(-prec/2)``).
    """
    lo, hi = to_big(lo), to_big(hi)
    tol = mpf(2) ** (-(mp.prec // 2)) if tol is None else to_big(tol)
    flo, fhi = h(lo), h(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketInvalid(f"h(lo)={mpmath.nstr(flo, 5)} and h(hi)={mpmath.nstr(fhi, 5)} share a sign")
    rising = fhi > 0
    for _ in range(max_iter):
        mid = (lo + hi) / 2
        fm = h(mid)
        if abs(fm) <= tol or hi - lo <= tol:
            return mid
        if (fm > 0) == rising:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2
