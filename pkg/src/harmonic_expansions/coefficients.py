"""Exact coefficients of the asymptotic expansions of H_n.

Three families are produced:

* Ramanujan, in powers of 1/m with m = n(n+1)/2,
* DeTemple-Wang, in powers of 1/(n + 1/2)^2,
* Euler, in powers of 1/n.

The Ramanujan coefficients are computed three independent ways (closed
form, umbral expansion, re-expansion of the DeTemple-Wang series) so the
routes can cross-check each other.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .exactmath import (
    DensePolynomial,
    bernoulli_number,
    bernoulli_poly_at_half,
    format_rational,
)

__all__ = [
    "FAMILIES",
    "CoefficientSeries",
    "ramanujan_coefficient",
    "ramanujan_coefficient_umbral",
    "ramanujan_from_dw_transform",
    "detemple_wang_coefficient",
    "euler_term",
    "coefficient_series",
    "RAMANUJAN_ENTRY9",
]

FAMILIES = ("ramanujan", "dw", "euler")

# The nine coefficients printed in Entry 9 of Ramanujan's notebooks.
RAMANUJAN_ENTRY9 = (
    Fraction(1, 12),
    Fraction(-1, 120),
    Fraction(1, 630),
    Fraction(-1, 1680),
    Fraction(1, 2310),
    Fraction(-191, 360360),
    Fraction(29, 30030),
    Fraction(-2833, 1166880),
    Fraction(140051, 17459442),
)


def _check_index(p: int) -> None:
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"coefficient index must be a positive integer, got {p!r}")


@lru_cache(maxsize=None)
def ramanujan_coefficient(p: int) -> Fraction:
    """R_p = (-1)^(p-1) / (2p 8^p) * (1 + sum_k C(p,k) (-4)^k B_2k(1/2))."""
    _check_index(p)
    acc = Fraction(1)
    for k in range(1, p + 1):
        acc += comb(p, k) * (-4) ** k * bernoulli_poly_at_half(2 * k)
    return Fraction((-1) ** (p - 1), 2 * p * 8**p) * acc


@lru_cache(maxsize=None)
def ramanujan_coefficient_umbral(p: int) -> Fraction:
    """R_p from -(1/2p) ((4B^2 - 1)/8)^p with B^(2j) -> B_2j(1/2) after expansion."""
    _check_index(p)
    # polynomial in the umbral symbol B
    base = DensePolynomial([Fraction(-1, 8), 0, Fraction(1, 2)])
    expanded = base**p
    acc = Fraction(0)
    for power, c in enumerate(expanded.coeffs):
        if not c:
            continue
        if power % 2:
            raise AssertionError("odd umbral power in an even polynomial")
        acc += c * bernoulli_poly_at_half(power)
    return -acc / (2 * p)


@lru_cache(maxsize=None)
def detemple_wang_coefficient(p: int) -> Fraction:
    """D_p = -B_2p(1/2) / (2p)."""
    if p == 0:
        raise ZeroDivisionError("D_0 is undefined (division by 2p = 0)")
    _check_index(p)
    return -bernoulli_poly_at_half(2 * p) / (2 * p)


@lru_cache(maxsize=None)
def ramanujan_from_dw_transform(p: int) -> Fraction:
    """R_p obtained by rewriting the DeTemple-Wang series in powers of 1/m.

    With (n + 1/2)^2 = 2m (1 + 1/(8m)), the term D_s / (n+1/2)^(2s)
    contributes D_s / 2^s * (-1)^(p-s) C(p-1, p-s) / 8^(p-s) to 1/m^p, and
    ln(n + 1/2) - (1/2) ln(2m) = (1/2) ln(1 + 1/(8m)) contributes
    (-1)^(p-1) / (2p 8^p).
    """
    _check_index(p)
    total = Fraction((-1) ** (p - 1), 2 * p * 8**p)
    # s = 0 carries C(p-1, p) = 0; s = p carries C(p-1, 0) = 1
    for s in range(1, p + 1):
        total += (
            detemple_wang_coefficient(s)
            / 2**s
            * (-1) ** (p - s)
            * comb(p - 1, p - s)
            / Fraction(8) ** (p - s)
        )
    return total


def euler_term(k: int) -> tuple[int, Fraction]:
    """k-th correction term of H_n - ln n - gamma as (power of 1/n, coefficient)."""
    _check_index(k)
    if k == 1:
        return 1, Fraction(1, 2)
    j = k - 1
    return 2 * j, -bernoulli_number(2 * j) / (2 * j)


@dataclass(frozen=True)
class CoefficientSeries:
    """Coefficients 1..N of one family.

    ``entries`` holds (index, exponent, value); the exponent is the power of
    the expansion variable and equals the index except for the Euler family.
    """

    family: str
    entries: tuple[tuple[int, int, Fraction], ...]

    def values(self) -> list[Fraction]:
        return [v for _, _, v in self.entries]

    def to_rows(self) -> list[dict]:
        rows = []
        for i, e, v in self.entries:
            row = {"p": i, "value": format_rational(v)}
            if self.family == "euler":
                row = {"p": i, "exponent": e, "value": row["value"]}
            rows.append(row)
        return rows

    def to_json(self) -> str:
        return json.dumps(self.to_rows(), indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["index", "numerator", "denominator"]
        if self.family == "euler":
            header.insert(1, "exponent")
        writer.writerow(header)
        for i, e, v in self.entries:
            row = [i, v.numerator, v.denominator]
            if self.family == "euler":
                row.insert(1, e)
            writer.writerow(row)
        return buf.getvalue()


def coefficient_series(family: str, count: int) -> CoefficientSeries:
    if count < 1:
        raise ValueError("count must be >= 1")
    if family == "ramanujan":
        entries = [(p, p, ramanujan_coefficient(p)) for p in range(1, count + 1)]
    elif family == "dw":
        entries = [(p, p, detemple_wang_coefficient(p)) for p in range(1, count + 1)]
    elif family == "euler":
        entries = [(k, *euler_term(k)) for k in range(1, count + 1)]
    else:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    return CoefficientSeries(family, tuple(entries))
