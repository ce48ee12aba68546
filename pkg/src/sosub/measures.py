"""Probability measures with exact moment oracles.

Two families are supported:

* ``GammaAlpha(alpha, n_vars)``: density ``C * exp(-sum |x_i|^alpha)`` on R^n.
  Substituting ``t = x^alpha`` in the univariate integral gives the even
  moments ``Gamma((k+1)/alpha) / Gamma(1/alpha)`` and the normalizing
  constant ``C = 1 / (2 Gamma(1 + 1/alpha))``; odd moments vanish.
* ``UniformBox(bounds)``: the uniform probability measure on a box.

Parameters are stored as exact ``Fraction`` values so that a measure means the
same thing at every working precision.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from mpmath import mp, mpf

from .numerics import check_precision, default_precision, gamma_fn, to_big, to_fraction, working_precision
from .polyring import DimMismatch, MultiIndex, Polynomial


class MeasureParseError(ValueError):
    pass


@dataclass(frozen=True)
class GammaAlpha:
    alpha: Fraction
    n_vars: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")

    def __str__(self) -> str:
        return f"gamma:alpha={_frac_str(self.alpha)},n={self.n_vars}"


@dataclass(frozen=True)
class UniformBox:
    bounds: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        clean = tuple((to_fraction(lo), to_fraction(hi)) for lo, hi in self.bounds)
        if not clean:
            raise ValueError("box needs at least one coordinate")
        for lo, hi in clean:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "bounds", clean)

    @property
    def n_vars(self) -> int:
        return len(self.bounds)

    def __str__(self) -> str:
        return "box:" + ",".join(f"{_frac_str(lo)}..{_frac_str(hi)}" for lo, hi in self.bounds)


MeasureSpec = Union[GammaAlpha, UniformBox]


def _frac_str(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    # Prefer a short decimal when one is exact.
    d = x.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        s = f"{float(x)!r}"
        if Fraction(s) == x:
            return s
    return f"{x.numerator}/{x.denominator}"


def parse_measure(text: str) -> MeasureSpec:
    """Parse ``gamma:alpha=2,n=1`` or ``box:-1..1,0..2``."""
    s = text.strip()
    kind, sep, rest = s.partition(":")
    if not sep:
        raise MeasureParseError(f"expected 'gamma:...' or 'box:...', got {text!r}")
    kind = kind.strip().lower()
    try:
        if kind == "gamma":
            opts = {}
            for part in filter(None, (p.strip() for p in rest.split(","))):
                key, eq, val = part.partition("=")
                if not eq:
                    raise MeasureParseError(f"bad option {part!r} in {text!r}")
                opts[key.strip().lower()] = val.strip()
            unknown = set(opts) - {"alpha", "n"}
            if unknown or "alpha" not in opts:
                raise MeasureParseError(f"gamma measure needs alpha=<value>[,n=<vars>], got {text!r}")
            return GammaAlpha(Fraction(opts["alpha"]), int(opts.get("n", 1)))
        if kind == "box":
            bounds = []
            for part in rest.split(","):
                ends = part.split("..")
                if len(ends) != 2:
                    raise MeasureParseError(f"bad interval {part!r} in {text!r}")
                bounds.append((Fraction(ends[0].strip()), Fraction(ends[1].strip())))
            return UniformBox(tuple(bounds))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, MeasureParseError):
            raise
        raise MeasureParseError(f"cannot parse measure {text!r}: {exc}") from exc
    raise MeasureParseError(f"unknown measure kind {kind!r}")


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def gamma_alpha_moment(alpha, k: int) -> mpf:
    """Normalized univariate moment ``E[x^k]`` under Gamma_alpha."""
    if k < 0:
        raise ValueError("moment order must be non-negative")
    if k % 2:
        return mpf(0)
    if k == 0:
        return mpf(1)
    a = to_big(to_fraction(alpha))
    if a <= 0:
        raise ValueError("alpha must be positive")
    return gamma_fn((k + 1) / a) / gamma_fn(1 / a)


def normalizing_constant(alpha) -> mpf:
    """``C_alpha = 1 / (2 Gamma(1 + 1/alpha))`` for the univariate density."""
    return _normalizing_constant(to_fraction(alpha), mp.prec)


@functools.lru_cache(maxsize=64)
def _normalizing_constant(alpha: Fraction, prec: int) -> mpf:
    with mp.workprec(prec):
        a = to_big(alpha)
        return 1 / (2 * gamma_fn(1 + 1 / a))


def density_w_alpha(alpha, x) -> mpf:
    """Univariate Gamma_alpha density ``C_alpha * exp(-|x|^alpha)``."""
    a = to_big(to_fraction(alpha))
    x = to_big(x)
    return normalizing_constant(alpha) * mp.exp(-(abs(x) ** a))


def uniform_moment(lo, hi, k: int) -> mpf:
    lo, hi = to_big(to_fraction(lo)), to_big(to_fraction(hi))
    return (hi ** (k + 1) - lo ** (k + 1)) / ((k + 1) * (hi - lo))


# ---------------------------------------------------------------------------
# Memoized moment sequence
# ---------------------------------------------------------------------------


class MomentSequence:
    """Moments of a measure at a fixed working precision.

    Values are memoized; the cache is guarded by a lock and filled with
    deterministic values, so concurrent callers see identical numbers.
    """

    def __init__(self, spec: MeasureSpec, precision_bits: int | None = None):
        self.spec = spec
        self.precision_bits = default_precision() if precision_bits is None else check_precision(precision_bits)
        self._univariate: dict[tuple[int, int], mpf] = {}
        self._cache: dict[MultiIndex, mpf] = {}
        self._lock = threading.Lock()

    @property
    def n_vars(self) -> int:
        return self.spec.n_vars

    def _univariate_moment(self, coord: int, k: int) -> mpf:
        key = (0 if isinstance(self.spec, GammaAlpha) else coord, k)
        val = self._univariate.get(key)
        if val is None:
            if isinstance(self.spec, GammaAlpha):
                val = gamma_alpha_moment(self.spec.alpha, k)
            else:
                lo, hi = self.spec.bounds[coord]
                val = uniform_moment(lo, hi, k)
            self._univariate[key] = val
        return val

    def moment(self, idx: MultiIndex | int) -> mpf:
        if isinstance(idx, int):
            idx = (idx,)
        idx = tuple(idx)
        if len(idx) != self.n_vars:
            raise DimMismatch(f"multi-index {idx} has wrong length for {self.n_vars} variables")
        val = self._cache.get(idx)
        if val is not None:
            return val
        with self._lock, working_precision(self.precision_bits):
            val = self._cache.get(idx)
            if val is None:
                val = mpf(1)
                for coord, k in enumerate(idx):
                    if k:
                        val *= self._univariate_moment(coord, k)
                self._cache[idx] = val
        return val

    def integrate(self, p: Polynomial) -> mpf:
        """``int p dmu`` as the linear combination of moments."""
        return integrate_poly(self, p)

    def __repr__(self) -> str:
        return f"MomentSequence({self.spec}, precision_bits={self.precision_bits})"


def integrate_poly(seq: MomentSequence, p: Polynomial) -> mpf:
    if p.n_vars != seq.n_vars:
        raise DimMismatch(f"polynomial has {p.n_vars} variables, measure has {seq.n_vars}")
    with working_precision(seq.precision_bits):
        return mp.fsum(c * seq.moment(idx) for idx, c in p.items())
