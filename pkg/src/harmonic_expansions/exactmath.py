"""Exact rational arithmetic helpers.

Everything here works on :class:`fractions.Fraction`, which already keeps
numerator and denominator reduced with a positive denominator. On top of it
we provide Bernoulli numbers, exact harmonic numbers, and two small
polynomial types used to replay the algebra behind the monotonicity proofs.
"""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Mapping

import gmpy2

__all__ = [
    "Rational",
    "as_rational",
    "rational_arith",
    "format_rational",
    "parse_rational",
    "bernoulli_number",
    "bernoulli_poly_at_half",
    "harmonic_exact",
    "harmonic_range",
    "harmonic_block",
    "DensePolynomial",
    "LaurentPolynomial",
    "laurent_arith",
    "poly_divmod_linear",
]

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are refused: nothing in this package is allowed to leak binary
    floating point into exact computations.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    # gmpy2.mpz / mpq and other numbers.Rational implementations
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    """Canonical ``num/den`` form; integers keep the ``/1``."""
    # mpz has no int-to-str digit limit, exact H_n for large n needs that
    return f"{gmpy2.mpz(q.numerator)}/{gmpy2.mpz(q.denominator)}"


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def rational_arith(a, b, op: str) -> Fraction:
    a, b = as_rational(a), as_rational(b)
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    if op == "div" and b == 0:
        raise ZeroDivisionError("division of a rational by zero")
    return fn(a, b)


# -- Bernoulli numbers ----------------------------------------------------

_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2.

    Uses sum_{j=0}^{k} C(k+1, j) B_j = 0 solved for B_k, memoized.
    """
    if k < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if k < len(_bernoulli):
        return _bernoulli[k]
    with _bernoulli_lock:
        table = _bernoulli
        for n in range(len(table), k + 1):
            if n > 1 and n % 2 == 1:
                table.append(Fraction(0))
                continue
            acc = Fraction(0)
            for j in range(n):
                if table[j]:
                    acc += comb(n + 1, j) * table[j]
            table.append(-acc / (n + 1))
        return table[k]


def bernoulli_poly_at_half(two_k: int) -> Fraction:
    """B_{2k}(1/2) = (2^(1-2k) - 1) B_{2k}."""
    if two_k < 0 or two_k % 2:
        raise ValueError(f"expected an even nonnegative index, got {two_k}")
    return (Fraction(2) ** (1 - two_k) - 1) * bernoulli_number(two_k)


# -- harmonic numbers -----------------------------------------------------

def _harmonic_split(a: int, b: int):
    # sum_{k=a}^{b-1} 1/k as an unreduced pair of mpz
    if b - a == 1:
        return gmpy2.mpz(1), gmpy2.mpz(a)
    if b - a == 2:
        return gmpy2.mpz(2 * a + 1), gmpy2.mpz(a) * (a + 1)
    mid = (a + b) // 2
    p1, q1 = _harmonic_split(a, mid)
    p2, q2 = _harmonic_split(mid, b)
    return p1 * q2 + p2 * q1, q1 * q2


def harmonic_block(a: int, b: int) -> tuple[int, int]:
    """Unreduced (p, q) with p/q = 1/a + ... + 1/b.

    Cheaper than :func:`harmonic_exact` for very large ranges when only
    comparisons are needed.
    """
    if not 1 <= a <= b:
        raise ValueError("need 1 <= a <= b")
    return _harmonic_split(a, b + 1)


def harmonic_exact(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n, summed by binary splitting."""
    if n < 1:
        raise ValueError("harmonic number H_n needs n >= 1")
    p, q = _harmonic_split(1, n + 1)
    g = gmpy2.gcd(p, q)
    return Fraction(int(p // g), int(q // g))


def harmonic_range(start: int, stop: int) -> Iterator[tuple[int, Fraction]]:
    """Yield (n, H_n) for start <= n <= stop, updating incrementally."""
    if start < 1:
        raise ValueError("harmonic numbers start at n = 1")
    h = harmonic_exact(start)
    yield start, h
    for n in range(start + 1, stop + 1):
        h += Fraction(1, n)
        yield n, h


# -- polynomials ----------------------------------------------------------

class DensePolynomial:
    """Univariate polynomial with exact coefficients, lowest degree first.

    The zero polynomial has ``degree is None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_descending(cls, coeffs: Iterable) -> "DensePolynomial":
        return cls(reversed(list(coeffs)))

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "DensePolynomial":
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __iter__(self):
        # without this, iteration would fall back to __getitem__ and never stop
        return iter(self.coeffs)

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> "DensePolynomial":
        if isinstance(other, DensePolynomial):
            return other
        return DensePolynomial([as_rational(other)])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DensePolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return DensePolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return DensePolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return DensePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        result = DensePolynomial([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, DensePolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == DensePolynomial([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"DensePolynomial({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c:
                mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
                parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def divmod_linear(self, root_shift) -> tuple["DensePolynomial", Fraction]:
        return poly_divmod_linear(self, root_shift)


def poly_divmod_linear(p: DensePolynomial, root_shift) -> tuple[DensePolynomial, Fraction]:
    """Synthetic division: p(x) = q(x) * (x - c) + r with r = p(c)."""
    if p.is_zero():
        raise ValueError("cannot divide the zero polynomial")
    c = as_rational(root_shift)
    desc = list(reversed(p.coeffs))
    acc = Fraction(0)
    quotient_desc = []
    for a in desc:
        acc = acc * c + a
        quotient_desc.append(acc)
    remainder = quotient_desc.pop()
    return DensePolynomial(reversed(quotient_desc)), remainder


class LaurentPolynomial:
    """Finite sum of exact coefficients times integer powers of x."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Fraction] = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), Fraction(0)) + as_rational(c)
        self.terms: dict[int, Fraction] = {e: c for e, c in sorted(acc.items()) if c != 0}

    @classmethod
    def constant(cls, c) -> "LaurentPolynomial":
        return cls({0: c})

    @classmethod
    def x(cls, power: int = 1, coeff=1) -> "LaurentPolynomial":
        return cls({power: coeff})

    @classmethod
    def from_polynomial(cls, p: DensePolynomial) -> "LaurentPolynomial":
        return cls(enumerate(p.coeffs))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_exponent(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def max_exponent(self) -> int | None:
        return max(self.terms) if self.terms else None

    def coefficient(self, e: int) -> Fraction:
        return self.terms.get(e, Fraction(0))

    def _coerce(self, other) -> "LaurentPolynomial":
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, DensePolynomial):
            return LaurentPolynomial.from_polynomial(other)
        return LaurentPolynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        return LaurentPolynomial(list(self.terms.items()) + list(other.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of a Laurent polynomial are not supported")
        result = LaurentPolynomial.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def shift(self, k: int) -> "LaurentPolynomial":
        """Multiply by x^k."""
        return LaurentPolynomial({e + k: c for e, c in self.terms.items()})

    def to_polynomial(self) -> DensePolynomial:
        if self.is_zero():
            return DensePolynomial()
        if self.min_exponent < 0:
            raise ValueError("Laurent polynomial has negative powers")
        out = [Fraction(0)] * (self.max_exponent + 1)
        for e, c in self.terms.items():
            out[e] = c
        return DensePolynomial(out)

    def __call__(self, x) -> Fraction:
        x = as_rational(x)
        if x == 0 and self.terms and self.min_exponent < 0:
            raise ZeroDivisionError("Laurent polynomial has a pole at 0")
        return sum((c * x**e for e, c in self.terms.items()), Fraction(0))

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == LaurentPolynomial.constant(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __repr__(self):
        body = ", ".join(f"{e}: {format_rational(c)}" for e, c in self.terms.items())
        return f"LaurentPolynomial({{{body}}})"


def laurent_arith(a: LaurentPolynomial, b: LaurentPolynomial, op: str) -> LaurentPolynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown Laurent operation {op!r}")
