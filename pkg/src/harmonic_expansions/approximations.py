"""Approximation formulas for H_n and the sequences built from their errors.

All values are certified enclosures. Quantities that come out of heavy
cancellation (the residuals behind lambda_n, delta_n, Theta_r, ...) are
evaluated at a working precision raised by a multiple of log2(m) bits and
rounded back at the end.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coefficients import detemple_wang_coefficient, ramanujan_coefficient
from .exactmath import format_rational, harmonic_exact
from .precision import (
    Enclosure,
    PrecisionConfig,
    PrecisionExhausted,
    digamma_enclosure,
    euler_gamma,
    ln_enclosure,
)

__all__ = [
    "FormulaId",
    "FORMULAS",
    "TABLE_FORMULAS",
    "EvalReport",
    "SequencePoint",
    "SEQUENCES",
    "SEQUENCE_LIMITS",
    "eval_formula",
    "theta_r",
    "sequence_value",
    "asymptotic_error_ratio",
    "predicted_error",
    "parse_formula",
    "parse_sequence",
    "triangular",
]

FORMULAS = (
    "Euler1",
    "TothMare2",
    "RamanujanLodge3",
    "DeTempleWang4",
    "Cesaro",
    "LodgeL1",
    "RamanujanSeries",
    "DWSeries",
)
TABLE_FORMULAS = ("Euler1", "TothMare2", "RamanujanLodge3", "DeTempleWang4")

SEQUENCES = (
    "f",
    "lambda",
    "LambdaL2",
    "d",
    "c",
    "lodgeResidual",
    "rho",
    "delta",
    "DeltaCap",
    "theta",
)

SEQUENCE_LIMITS = {
    "f": Fraction(1, 3),
    "lambda": Fraction(6, 5),
    "LambdaL2": Fraction(6, 5),
    "d": Fraction(21, 5),
    "c": Fraction(1),
    "lodgeResidual": Fraction(0),
    "rho": Fraction(0),
    "DeltaCap": Fraction(0),
}

# how many multiples of log2(m) a sequence loses to cancellation
_LOSS = {
    "f": 2,
    "lambda": 3,
    "LambdaL2": 3,
    "d": 3,
    "c": 2,
    "lodgeResidual": 4,
    "rho": 5,
    "delta": 6,
    "DeltaCap": 4,
}


@dataclass(frozen=True)
class FormulaId:
    tag: str
    r: int | None = None

    def __post_init__(self):
        if self.tag not in FORMULAS:
            raise ValueError(f"unknown formula {self.tag!r}")
        needs_r = self.tag in ("RamanujanSeries", "DWSeries")
        if needs_r and (self.r is None or self.r < 1):
            raise ValueError(f"{self.tag} needs an order r >= 1")
        if not needs_r and self.r is not None:
            raise ValueError(f"{self.tag} takes no order")

    def __str__(self):
        return f"{self.tag}({self.r})" if self.r is not None else self.tag


_FORMULA_ALIASES = {
    "euler": "Euler1",
    "euler1": "Euler1",
    "tothmare": "TothMare2",
    "tothmare2": "TothMare2",
    "toth-mare": "TothMare2",
    "ramanujanlodge": "RamanujanLodge3",
    "ramanujanlodge3": "RamanujanLodge3",
    "ramanujan-lodge": "RamanujanLodge3",
    "detemplewang": "DeTempleWang4",
    "detemplewang4": "DeTempleWang4",
    "dw4": "DeTempleWang4",
    "cesaro": "Cesaro",
    "lodgel1": "LodgeL1",
    "lodge": "LodgeL1",
    "ramanujanseries": "RamanujanSeries",
    "ram": "RamanujanSeries",
    "dwseries": "DWSeries",
    "dw": "DWSeries",
}


def parse_formula(text: str) -> FormulaId:
    """Parse ``Euler1``, ``dw4``, ``RamanujanSeries(9)``, ``ram:9`` and similar."""
    m = re.fullmatch(r"\s*([A-Za-z0-9_-]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*", text)
    if not m:
        raise ValueError(f"cannot parse formula {text!r}")
    name, r = m.group(1), m.group(2)
    tag = name if name in FORMULAS else _FORMULA_ALIASES.get(name.lower())
    if tag is None:
        raise ValueError(f"unknown formula {name!r}")
    return FormulaId(tag, int(r) if r is not None else None)


_SEQUENCE_ALIASES = {s.lower(): s for s in SEQUENCES}
_SEQUENCE_ALIASES.update({"lodge": "lodgeResidual", "lambdal2": "LambdaL2", "deltacap": "DeltaCap"})


def parse_sequence(text: str) -> tuple[str, int | None]:
    m = re.fullmatch(r"\s*([A-Za-z0-9_]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*", text)
    if not m:
        raise ValueError(f"cannot parse sequence {text!r}")
    name = m.group(1)
    which = name if name in SEQUENCES else _SEQUENCE_ALIASES.get(name.lower())
    if which is None:
        raise ValueError(f"unknown sequence {name!r}")
    r = int(m.group(2)) if m.group(2) is not None else None
    if which == "theta" and (r is None or r < 1):
        raise ValueError("theta needs an order, e.g. theta(3)")
    if which != "theta" and r is not None:
        raise ValueError(f"sequence {which} takes no order")
    return which, r


def triangular(n: int) -> Fraction:
    return Fraction(n * (n + 1), 2)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")


def _log2_ceil(q: Fraction) -> int:
    return max(0, q.numerator.bit_length() - q.denominator.bit_length() + 1)


# -- cached building blocks -------------------------------------------------

@lru_cache(maxsize=8192)
def _ln(q: Fraction, bits: int) -> Enclosure:
    return ln_enclosure(q, PrecisionConfig(bits))


@lru_cache(maxsize=8192)
def _psi(n: int, bits: int) -> Enclosure:
    # psi(n + 1) = H_n - gamma
    return digamma_enclosure(n, PrecisionConfig(bits))


def _half_ln_2m(n: int, bits: int) -> Enclosure:
    # ln(2m) = ln n + ln(n + 1)
    return (_ln(Fraction(n), bits) + _ln(Fraction(n + 1), bits)) * Fraction(1, 2)


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class EvalReport:
    n: int
    formula: FormulaId
    approx: Enclosure
    truth: Fraction
    error: Enclosure
    sign: str  # "over", "under" or "undetermined"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "formula": str(self.formula),
            "approx": self.approx.to_dict(),
            "truth": format_rational(self.truth),
            "error": self.error.to_dict(),
            "sign": self.sign,
        }


def _formula_value(fid: FormulaId, n: int, bits: int) -> Enclosure:
    gamma = euler_gamma(PrecisionConfig(bits))
    nn = Fraction(n)
    m = triangular(n)
    half = nn + Fraction(1, 2)
    tag = fid.tag
    if tag == "Euler1":
        return _ln(nn, bits) + gamma + Enclosure.exact(1 / (2 * nn), bits)
    if tag == "TothMare2":
        return _ln(nn, bits) + gamma + Enclosure.exact(1 / (2 * nn + Fraction(1, 3)), bits)
    if tag in ("RamanujanLodge3", "LodgeL1"):
        # ln sqrt(n(n+1)) = (1/2) ln(2m) and 6n(n+1) = 12m
        return _half_ln_2m(n, bits) + gamma + Enclosure.exact(1 / (12 * m + Fraction(6, 5)), bits)
    if tag == "DeTempleWang4":
        return _ln(half, bits) + gamma + Enclosure.exact(1 / (24 * half**2 + Fraction(21, 5)), bits)
    if tag == "Cesaro":
        return _half_ln_2m(n, bits) + gamma + Enclosure.exact(1 / (12 * m), bits)
    if tag == "RamanujanSeries":
        s = sum((ramanujan_coefficient(p) / m**p for p in range(1, fid.r + 1)), Fraction(0))
        return _half_ln_2m(n, bits) + gamma + Enclosure.exact(s, bits)
    if tag == "DWSeries":
        y = half**2
        s = sum((detemple_wang_coefficient(p) / y**p for p in range(1, fid.r + 1)), Fraction(0))
        return _ln(half, bits) + gamma + Enclosure.exact(s, bits)
    raise ValueError(f"unhandled formula {fid}")


def _sign(err: Enclosure) -> str:
    if err.is_positive():
        return "over"
    if err.is_negative():
        return "under"
    return "undetermined"


def eval_formula(fid: FormulaId | str, n: int, cfg: PrecisionConfig = PrecisionConfig()) -> EvalReport:
    """Evaluate an approximation of H_n and its certified error against exact H_n.

    The precision is doubled until the sign of the error is decided or the
    refinement budget runs out, in which case ``sign`` is "undetermined".
    """
    if isinstance(fid, str):
        fid = parse_formula(fid)
    _check_n(n)
    truth = harmonic_exact(n)
    order = 2 * (fid.r + 1) if fid.r else 8
    extra = _log2_ceil(Fraction(n + 1)) * order + 32
    report = None
    for level in range(cfg.max_refinements + 1):
        bits = cfg.refined(level).bits + extra
        approx = _formula_value(fid, n, bits)
        error = approx - Enclosure.exact(truth, bits)
        report = EvalReport(n, fid, approx, truth, error, _sign(error))
        if report.sign != "undetermined":
            break
    return report


_PREDICTED = {
    "Euler1": lambda n: Fraction(1, 12 * n**2),
    "TothMare2": lambda n: Fraction(1, 72 * n**3),
    "RamanujanLodge3": lambda n: Fraction(19, 3150 * (n * (n + 1)) ** 3),
    "DeTempleWang4": lambda n: Fraction(2071, 806400) / (Fraction(2 * n + 1, 2) ** 6),
}


def predicted_error(fid: FormulaId | str, n: int) -> Fraction:
    """Leading magnitude of the error of one of the four tabulated formulas."""
    if isinstance(fid, str):
        fid = parse_formula(fid)
    if fid.tag not in _PREDICTED:
        raise ValueError(f"no asymptotic error estimate for {fid}")
    return _PREDICTED[fid.tag](n)


def asymptotic_error_ratio(fid: FormulaId | str, n: int, cfg: PrecisionConfig = PrecisionConfig()) -> Enclosure:
    """|error(n)| divided by the tabulated leading error term."""
    if isinstance(fid, str):
        fid = parse_formula(fid)
    pred = predicted_error(fid, n)
    report = eval_formula(fid, n, cfg)
    return abs(report.error) / pred


# -- sequences --------------------------------------------------------------

@dataclass(frozen=True)
class SequencePoint:
    n: int
    which: str
    value: Enclosure
    r: int | None = None
    determined: bool = True

    @property
    def label(self) -> str:
        return f"theta({self.r})" if self.which == "theta" else self.which

    def to_dict(self) -> dict:
        d = {"n": self.n, "which": self.label, "value": self.value.to_dict()}
        if not self.determined:
            d["undetermined_width"] = True
        return d


def _sequence_raw(which: str, n: int, bits: int, r: int | None) -> Enclosure:
    psi = _psi(n, bits)  # H_n - gamma
    m = triangular(n)
    if which == "f":
        res = psi - _ln(Fraction(n), bits)
        return res.reciprocal() - 2 * n
    if which == "lambda":
        res = psi - _half_ln_2m(n, bits)
        return res.reciprocal() - 12 * m
    if which == "d":
        half = Fraction(2 * n + 1, 2)
        res = psi - _ln(half, bits)
        return res.reciprocal() - 24 * half**2
    res = psi - _half_ln_2m(n, bits)  # H_n - (1/2) ln(2m) - gamma
    if which == "c":
        return res * (12 * m)
    if which == "lodgeResidual":
        return res - 1 / (12 * m + Fraction(6, 5))
    if which == "rho":
        return Fraction(19, 25200) / m**3 - (res - 1 / (12 * m + Fraction(6, 5)))
    if which == "LambdaL2":
        return res.reciprocal() - 12 * m
    if which == "delta":
        big_lambda = res.reciprocal() - 12 * m
        poly = Fraction(6, 5) - Fraction(19, 175) / m + Fraction(13, 250) / m**2
        return (poly - big_lambda) * m**3
    if which == "DeltaCap":
        return Fraction(6, 5) - (res.reciprocal() - 12 * m)
    if which == "theta":
        partial = sum((ramanujan_coefficient(p) / m**p for p in range(1, r + 1)), Fraction(0))
        return (res - partial) * (m ** (r + 1) / ramanujan_coefficient(r + 1))
    raise ValueError(f"unknown sequence {which!r}")


def _working_bits(which: str, n: int, bits: int, r: int | None) -> int:
    loss = (r + 1) if which == "theta" else _LOSS[which]
    return bits + loss * _log2_ceil(triangular(n) + 1) + 32


def _good_width(enc: Enclosure, bits: int) -> bool:
    lo, hi = enc.bounds()
    scale = max(Fraction(1), abs(lo), abs(hi))
    return hi - lo <= scale / (1 << max(bits - 8, 0))


def sequence_value(
    which: str, n: int, cfg: PrecisionConfig = PrecisionConfig(), r: int | None = None
) -> SequencePoint:
    """Certified enclosure of one of the error sequences at n.

    ``which`` is one of f, lambda, LambdaL2, d, c, lodgeResidual, rho, delta,
    DeltaCap or theta; theta also needs the order ``r`` (``"theta(3)"`` is
    accepted as well).
    """
    if r is None and which not in SEQUENCES:
        which, r = parse_sequence(which)
    if which not in SEQUENCES:
        raise ValueError(f"unknown sequence {which!r}")
    if which == "theta" and (r is None or r < 1):
        raise ValueError("theta needs r >= 1")
    _check_n(n)
    value = None
    for level in range(cfg.max_refinements + 1):
        bits = cfg.refined(level).bits
        value = _sequence_raw(which, n, _working_bits(which, n, bits, r), r).rounded(bits)
        if _good_width(value, cfg.bits):
            return SequencePoint(n, which, value, r)
    return SequencePoint(n, which, value, r, determined=False)


def theta_r(n: int, r: int, cfg: PrecisionConfig = PrecisionConfig()) -> Enclosure:
    """Enclosure of the bracket ratio Theta_r(n) of the Ramanujan expansion.

    Theta_r = (H_n - ln(2m)/2 - gamma - sum_{p<=r} R_p/m^p) m^(r+1) / R_(r+1).
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    point = sequence_value("theta", n, cfg, r=r)
    if not point.determined:
        raise PrecisionExhausted(f"theta_{r}({n}) too wide after refinement", point.value)
    return point.value
