"""Certified real arithmetic at a chosen binary precision.

An :class:`Enclosure` is a pair of MPFR numbers ``lo <= hi`` (rounded down
and up respectively) that is guaranteed to contain the exact value it
stands for. Every operation rounds outward, so chains of operations stay
certified.

The transcendental building blocks are

* ``ln`` by argument reduction to [sqrt(1/2), sqrt(2)] and the atanh series
  evaluated in fixed point with an explicit error count,
* ``psi(x + 1)`` and ``psi'(x + 1)`` from their Euler-Maclaurin expansions,
  where the remainder is a fraction in [0, 1] of the first omitted term,
* Euler's constant as H_N - psi(N + 1).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Callable, TypeVar

import gmpy2
from gmpy2 import mpfr, mpq

from .exactmath import as_rational, bernoulli_number, harmonic_exact

__all__ = [
    "PrecisionConfig",
    "Enclosure",
    "PrecisionExhausted",
    "euler_gamma",
    "ln_enclosure",
    "digamma_enclosure",
    "trigamma_enclosure",
    "refine",
    "series_threshold",
]

MIN_BITS = 32
# extra bits carried internally before the final outward rounding
GUARD_BITS = 24


@dataclass(frozen=True)
class PrecisionConfig:
    bits: int = 128
    max_refinements: int = 8

    def __post_init__(self):
        if self.bits < MIN_BITS:
            raise ValueError(f"precision must be at least {MIN_BITS} bits, got {self.bits}")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be >= 0")

    def refined(self, level: int = 1) -> "PrecisionConfig":
        """The config after ``level`` doublings of the precision."""
        return replace(self, bits=self.bits << level)

    def with_bits(self, bits: int) -> "PrecisionConfig":
        return replace(self, bits=max(bits, MIN_BITS))


class PrecisionExhausted(ArithmeticError):
    """Raised when a width target is missed after every allowed refinement."""

    def __init__(self, message: str, best: "Enclosure"):
        super().__init__(message)
        self.best = best


@lru_cache(maxsize=None)
def _ctx(bits: int, up: bool):
    return gmpy2.context(
        precision=bits, round=gmpy2.RoundUp if up else gmpy2.RoundDown
    )


def _exact(n: int) -> mpfr:
    return mpfr(n, max(2, abs(n).bit_length()))


_ONE = _exact(1)


def _to_mpq(value) -> mpq:
    q = as_rational(value)
    return mpq(q.numerator, q.denominator)


def _mpfr_to_fraction(v: mpfr) -> Fraction:
    num, den = v.as_integer_ratio()
    return Fraction(int(num), int(den))


class Enclosure:
    """Closed interval [lo, hi] with outward-rounded MPFR endpoints."""

    __slots__ = ("lo", "hi", "bits")

    def __init__(self, lo: mpfr, hi: mpfr, bits: int):
        if not lo <= hi:
            raise ValueError(f"invalid enclosure: lo={lo} > hi={hi}")
        self.lo = lo
        self.hi = hi
        self.bits = bits

    # -- construction ----------------------------------------------------
    @classmethod
    def exact(cls, value, bits: int) -> "Enclosure":
        """Tightest ``bits``-bit enclosure of an exact rational."""
        q = as_rational(value)
        num, den = _exact(q.numerator), _exact(q.denominator)
        return cls(_ctx(bits, False).div(num, den), _ctx(bits, True).div(num, den), bits)

    @classmethod
    def between(cls, lo, hi, bits: int) -> "Enclosure":
        """Enclosure of the rational interval [lo, hi], rounded outward."""
        lo, hi = as_rational(lo), as_rational(hi)
        if lo > hi:
            lo, hi = hi, lo
        down = _ctx(bits, False).div(_exact(lo.numerator), _exact(lo.denominator))
        up = _ctx(bits, True).div(_exact(hi.numerator), _exact(hi.denominator))
        return cls(down, up, bits)

    @classmethod
    def from_fixed(cls, value: int, err: int, scale_bits: int, bits: int) -> "Enclosure":
        """Enclosure of [(value - err) / 2^scale_bits, (value + err) / 2^scale_bits]."""
        den = _exact(1 << scale_bits)
        lo = _ctx(bits, False).div(_exact(value - err), den)
        hi = _ctx(bits, True).div(_exact(value + err), den)
        return cls(lo, hi, bits)

    def _coerce(self, other) -> "Enclosure":
        if isinstance(other, Enclosure):
            return other
        return Enclosure.exact(other, self.bits)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        bits = max(self.bits, other.bits)
        return Enclosure(
            _ctx(bits, False).add(self.lo, other.lo),
            _ctx(bits, True).add(self.hi, other.hi),
            bits,
        )

    __radd__ = __add__

    def __neg__(self):
        # plain unary minus would round to the default 53-bit context
        ctx = _ctx(max(self.lo.precision, self.hi.precision), False)
        return Enclosure(ctx.minus(self.hi), ctx.minus(self.lo), self.bits)

    def __sub__(self, other):
        other = self._coerce(other)
        bits = max(self.bits, other.bits)
        return Enclosure(
            _ctx(bits, False).sub(self.lo, other.hi),
            _ctx(bits, True).sub(self.hi, other.lo),
            bits,
        )

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        bits = max(self.bits, other.bits)
        down, up = _ctx(bits, False), _ctx(bits, True)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return Enclosure(
            min(down.mul(a, b) for a, b in pairs),
            max(up.mul(a, b) for a, b in pairs),
            bits,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError(f"divisor enclosure {other} contains zero")
        bits = max(self.bits, other.bits)
        down, up = _ctx(bits, False), _ctx(bits, True)
        pairs = [(self.lo, other.lo), (self.lo, other.hi), (self.hi, other.lo), (self.hi, other.hi)]
        return Enclosure(
            min(down.div(a, b) for a, b in pairs),
            max(up.div(a, b) for a, b in pairs),
            bits,
        )

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def reciprocal(self) -> "Enclosure":
        return Enclosure.exact(1, self.bits) / self

    def square(self) -> "Enclosure":
        down, up = _ctx(self.bits, False), _ctx(self.bits, True)
        if self.lo >= 0:
            return Enclosure(down.mul(self.lo, self.lo), up.mul(self.hi, self.hi), self.bits)
        if self.hi <= 0:
            return Enclosure(down.mul(self.hi, self.hi), up.mul(self.lo, self.lo), self.bits)
        top = max(up.mul(self.lo, self.lo), up.mul(self.hi, self.hi))
        return Enclosure(_exact(0), top, self.bits)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Enclosure(_exact(0), max((-self).hi, self.hi), self.bits)

    def rounded(self, bits: int) -> "Enclosure":
        """Round the endpoints outward to ``bits`` bits."""
        return Enclosure(
            _ctx(bits, False).mul(self.lo, _ONE), _ctx(bits, True).mul(self.hi, _ONE), bits
        )

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi), max(self.bits, other.bits))

    # -- queries ---------------------------------------------------------
    def width(self) -> mpfr:
        return _ctx(max(self.bits, 64), True).sub(self.hi, self.lo)

    def width_fraction(self) -> Fraction:
        return _mpfr_to_fraction(self.hi) - _mpfr_to_fraction(self.lo)

    def midpoint(self) -> mpfr:
        bits = self.bits + 2
        return _ctx(bits, False).div(_ctx(bits, False).add(self.lo, self.hi), _exact(2))

    def bounds(self) -> tuple[Fraction, Fraction]:
        return _mpfr_to_fraction(self.lo), _mpfr_to_fraction(self.hi)

    def contains(self, value) -> bool:
        if isinstance(value, Enclosure):
            return self.lo <= value.lo and value.hi <= self.hi
        q = _to_mpq(value)
        return self.lo <= q <= self.hi

    def subset_of(self, other: "Enclosure") -> bool:
        return other.contains(self)

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def strictly_inside(self, lower, upper) -> bool:
        """True iff lower < lo and hi < upper (open region, no touching)."""
        return _to_mpq(lower) < self.lo and self.hi < _to_mpq(upper)

    def is_positive(self) -> bool:
        return self.lo > 0

    def is_negative(self) -> bool:
        return self.hi < 0

    def certainly_less(self, other) -> bool:
        other = self._coerce(other)
        return self.hi < other.lo

    def certainly_greater(self, other) -> bool:
        other = self._coerce(other)
        return self.lo > other.hi

    def __float__(self):
        return float(self.midpoint())

    def __repr__(self):
        lo, hi = self.decimal_strings()
        return f"Enclosure([{lo}, {hi}], bits={self.bits})"

    # -- serialization ---------------------------------------------------
    def decimal_strings(self) -> tuple[str, str]:
        """Decimal renderings, lo rounded down and hi rounded up.

        Enough digits are printed to tell lo from hi, plus two guard digits.
        """
        lo, hi = self.bounds()
        w = hi - lo
        if w:
            digits = len(str(w.denominator)) - len(str(w.numerator)) + 2
        else:
            mag = abs(lo) if lo else Fraction(1)
            lead = len(str(mag.numerator)) - len(str(mag.denominator))
            digits = int(self.bits * 0.30103) - lead + 1
        digits = max(digits, 1)
        return _decimal(lo, digits, up=False), _decimal(hi, digits, up=True)

    def to_dict(self) -> dict:
        lo, hi = self.decimal_strings()
        return {"lo": lo, "hi": hi, "bits": self.bits}


def _decimal(q: Fraction, digits: int, up: bool) -> str:
    scaled = q * 10**digits
    n = -((-scaled.numerator) // scaled.denominator) if up else scaled.numerator // scaled.denominator
    sign = "-" if n < 0 else ""
    s = str(abs(n)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


T = TypeVar("T")


def refine(
    compute: Callable[[PrecisionConfig], T],
    cfg: PrecisionConfig,
    accept: Callable[[T], bool],
) -> tuple[T, PrecisionConfig, bool]:
    """Recompute with doubled precision until ``accept`` holds.

    Returns the last value, the config that produced it, and whether it was
    accepted.
    """
    value = None
    used = cfg
    for level in range(cfg.max_refinements + 1):
        used = cfg.refined(level)
        value = compute(used)
        if accept(value):
            return value, used, True
    return value, used, False


# -- logarithm -------------------------------------------------------------

def _atanh_fixed(a: int, b: int, scale: int) -> tuple[int, int]:
    """atanh(a/b) * 2^scale as (value, error bound in units), |a/b| <= 1/3."""
    if 3 * abs(a) > abs(b):
        raise ValueError("atanh argument outside [-1/3, 1/3]")
    t = (a << scale) // b
    t2 = (t * t) >> scale
    power = t
    total = 0
    terms = 0
    while abs(power) > 2:
        total += power // (2 * terms + 1)
        power = (power * t2) >> scale
        terms += 1
    # each partial term is off by < 3 units; the neglected tail is < 4.5 units
    return total, 3 * terms + 8


@lru_cache(maxsize=64)
def _ln2_fixed(scale: int) -> tuple[int, int]:
    v, e = _atanh_fixed(1, 3, scale)
    return 2 * v, 2 * e


def _ln_fixed(q: Fraction, scale: int) -> tuple[int, int]:
    p, d = q.numerator, q.denominator
    k = p.bit_length() - d.bit_length()

    def reduced(k: int) -> tuple[int, int]:
        return (p, d << k) if k >= 0 else (p << -k, d)

    a, b = reduced(k)
    # move y = a/b into [sqrt(1/2), sqrt(2)]
    while a * a > 2 * b * b:
        k += 1
        a, b = reduced(k)
    while 2 * a * a < b * b:
        k -= 1
        a, b = reduced(k)
    v, e = _atanh_fixed(a - b, a + b, scale)
    v, e = 2 * v, 2 * e
    if k:
        l2, e2 = _ln2_fixed(scale)
        v += k * l2
        e += abs(k) * e2
    return v, e


def ln_enclosure(x, cfg: PrecisionConfig) -> Enclosure:
    """Enclosure of ln x for an exact rational x > 0."""
    q = as_rational(x)
    if q <= 0:
        raise ValueError(f"ln is undefined for x = {q}")
    if q == 1:
        return Enclosure.exact(0, cfg.bits)
    scale = cfg.bits + GUARD_BITS + max(q.numerator.bit_length(), q.denominator.bit_length()).bit_length()
    v, e = _ln_fixed(q, scale)
    return Enclosure.from_fixed(v, e, scale, cfg.bits)


# -- digamma / trigamma ----------------------------------------------------

def series_threshold(bits: int) -> int:
    """Smallest argument at which the asymptotic series is applied.

    The smallest term of the digamma expansion at y is about exp(-2 pi y),
    so y >= bits / 8 leaves room to reach 2^-bits; never below 16.
    """
    return max(16, -(-bits // 8))


def _digamma_series(y: Fraction, scale: int) -> tuple[Fraction, Fraction]:
    """Rational part Q and first omitted term T of psi(y + 1) - ln y.

    psi(y + 1) = ln y + Q + theta T with theta in [0, 1].
    """
    eps = Fraction(1, 1 << scale)
    q = Fraction(1, 2) / y
    y2 = y * y
    ypow = y2
    k = 1
    while True:
        term = -bernoulli_number(2 * k) / (2 * k) / ypow
        if abs(term) <= eps:
            return q, term
        q += term
        ypow *= y2
        k += 1


def _trigamma_series(y: Fraction, scale: int) -> tuple[Fraction, Fraction]:
    """psi'(y + 1) = Q + theta T with theta in [0, 1]."""
    eps = Fraction(1, 1 << scale) / y
    q = 1 / y - Fraction(1, 2) / (y * y)
    y2 = y * y
    ypow = y2 * y
    k = 1
    while True:
        term = bernoulli_number(2 * k) / ypow
        if abs(term) <= eps:
            return q, term
        q += term
        ypow *= y2
        k += 1


def _shift(x: Fraction, bits: int) -> tuple[Fraction, int]:
    start = series_threshold(bits)
    n = max(0, -(-(start - x) // 1))
    return x + n, int(n)


def _bracket(base: Fraction, term: Fraction) -> tuple[Fraction, Fraction]:
    other = base + term
    return (base, other) if term >= 0 else (other, base)


def digamma_enclosure(x, cfg: PrecisionConfig) -> Enclosure:
    """Enclosure of psi(x + 1) for rational x > 0.

    The argument is shifted up with psi(x + 1) = psi(y + 1) - sum 1/(x + j),
    y = x + N, and the expansion is cut where the first omitted term drops
    below 2^-(bits + guard); the omitted part is bracketed by [0, term].
    """
    x = as_rational(x)
    if x <= 0:
        raise ValueError(f"digamma_enclosure needs x > 0, got {x}")
    work = cfg.bits + GUARD_BITS
    y, n = _shift(x, work)
    q, term = _digamma_series(y, work)
    if n:
        q -= sum((Fraction(1) / (x + j) for j in range(1, n + 1)), Fraction(0))
    lo, hi = _bracket(q, term)
    ln_y = ln_enclosure(y, PrecisionConfig(work, cfg.max_refinements))
    return (ln_y + Enclosure.between(lo, hi, work)).rounded(cfg.bits)


def trigamma_enclosure(x, cfg: PrecisionConfig) -> Enclosure:
    """Enclosure of psi'(x + 1) for rational x > 0."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError(f"trigamma_enclosure needs x > 0, got {x}")
    work = cfg.bits + GUARD_BITS
    y, n = _shift(x, work)
    q, term = _trigamma_series(y, work)
    if n:
        q += sum((Fraction(1) / (x + j) ** 2 for j in range(1, n + 1)), Fraction(0))
    lo, hi = _bracket(q, term)
    return Enclosure.between(lo, hi, cfg.bits)


# -- Euler's constant ------------------------------------------------------

@lru_cache(maxsize=32)
def _gamma_at(bits: int) -> Enclosure:
    n = series_threshold(bits)
    q, term = _digamma_series(Fraction(n), bits)
    # gamma = H_N - psi(N + 1) = H_N - ln N - Q - theta T
    lo, hi = _bracket(harmonic_exact(n) - q, -term)
    return Enclosure.between(lo, hi, bits) - ln_enclosure(n, PrecisionConfig(bits))


def euler_gamma(cfg: PrecisionConfig) -> Enclosure:
    """Enclosure of Euler's constant of width at most 2^(8 - bits)."""
    target = Fraction(1, 1 << max(cfg.bits - 8, 0))
    best = None
    for level in range(cfg.max_refinements + 1):
        work = cfg.bits + GUARD_BITS * (level + 1)
        enc = _gamma_at(work).rounded(cfg.bits)
        if enc.width_fraction() <= target:
            return enc
        best = enc
    raise PrecisionExhausted(f"gamma width target 2^{8 - cfg.bits} not reached", best)
