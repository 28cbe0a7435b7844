"""Machine checks of the inequalities and identities around H_n.

Each ``verify_*`` function returns a :class:`VerificationReport`. A check
is "proved" only when exact arithmetic settles it or when a certified
enclosure lies strictly inside the claimed region; touching the boundary
never counts. Facts that contradict the printed source material but do not
invalidate a claim are collected as findings.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .approximations import (
    TABLE_FORMULAS,
    asymptotic_error_ratio,
    eval_formula,
    sequence_value,
    triangular,
)
from .coefficients import (
    RAMANUJAN_ENTRY9,
    detemple_wang_coefficient,
    ramanujan_coefficient,
    ramanujan_coefficient_umbral,
    ramanujan_from_dw_transform,
)
from .exactmath import (
    DensePolynomial,
    LaurentPolynomial,
    format_rational,
    harmonic_block,
    harmonic_exact,
    poly_divmod_linear,
)
from .precision import (
    Enclosure,
    PrecisionConfig,
    digamma_enclosure,
    euler_gamma,
    ln_enclosure,
    trigamma_enclosure,
)

__all__ = [
    "Check",
    "VerificationReport",
    "DEFAULT_SAMPLES",
    "SUITES",
    "verify_oresme",
    "verify_lemma2",
    "verify_lemma3",
    "verify_identity_lambda",
    "verify_identity_d",
    "verify_monotone",
    "verify_sharp_theorems",
    "verify_coefficient_tables",
    "verify_theta",
    "verify_cesaro",
    "verify_lodge",
    "verify_error_table",
    "run_suite",
    "LAMBDA_TABLE",
    "D_TABLE",
]

PROVED, REFUTED, UNDETERMINED = "proved", "refuted", "undetermined"

DEFAULT_SAMPLES = tuple(
    Fraction(s) for s in ("1/2", "1", "2", "5", "10", "28", "29", "100", "1000")
)


@dataclass
class Check:
    label: str
    status: str
    witness: dict | None = None

    def __post_init__(self):
        if self.status not in (PROVED, REFUTED, UNDETERMINED):
            raise ValueError(f"bad status {self.status!r}")
        if self.status != PROVED and self.witness is None:
            raise ValueError("refuted and undetermined checks need a witness")

    def to_dict(self) -> dict:
        d = {"label": self.label, "status": self.status}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == PROVED for c in self.checks)

    def add(self, label: str, ok: bool | None, witness: dict | None = None) -> Check:
        status = PROVED if ok else (UNDETERMINED if ok is None else REFUTED)
        check = Check(label, status, witness)
        self.checks.append(check)
        return check

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)
        self.findings.extend(other.findings)

    def to_dict(self) -> dict:
        d = {"suite": self.suite, "passed": self.passed, "checks": [c.to_dict() for c in self.checks]}
        if self.findings:
            d["findings"] = list(self.findings)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"== {self.suite}: {'PASS' if self.passed else 'FAIL'} =="]
        for c in self.checks:
            lines.append(f"  [{c.status:>12}] {c.label}")
            if c.witness is not None and c.status != PROVED:
                lines.append(f"                 witness: {json.dumps(c.witness)}")
        for f in self.findings:
            lines.append(f"  finding: {f}")
        return "\n".join(lines)


def _enc(e: Enclosure) -> dict:
    return e.to_dict()


def _q(x: Fraction) -> str:
    return format_rational(x)


# -- Oresme ------------------------------------------------------------------

def verify_oresme(k_max: int = 20) -> VerificationReport:
    """H_(2^k) > (k + 1)/2 for k = 2..k_max, in exact arithmetic."""
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    report = VerificationReport("oresme")
    # H_(2^k) as an unreduced pair, grown one dyadic block at a time
    p, q = harmonic_block(1, 2)
    for k in range(2, k_max + 1):
        bp, bq = harmonic_block(2 ** (k - 1) + 1, 2**k)
        p, q = p * bq + bp * q, q * bq
        ok = 2 * p > (k + 1) * q
        witness = None
        if not ok:
            witness = {"k": k, "H": _q(Fraction(int(p), int(q))), "bound": _q(Fraction(k + 1, 2))}
        report.add(f"H_(2^{k}) > {k + 1}/2", ok, witness)
    return report


# -- digamma bounds ------------------------------------------------------------

def _laurent(pairs: Iterable[tuple[int, Fraction | int]]) -> LaurentPolynomial:
    """Build sum c * x^(-k) from (k, c) pairs."""
    return LaurentPolynomial({-k: c for k, c in pairs})


_F = Fraction
# bounds for 2 psi(x+1) - ln(x(x+1))
LOGMEAN_PSI_UPPER = _laurent([(2, _F(1, 3)), (3, _F(-1, 3)), (4, _F(4, 15)), (5, _F(-1, 5)), (6, _F(10, 63))])
LOGMEAN_PSI_LOWER = LOGMEAN_PSI_UPPER + _laurent([(7, _F(-1, 7))])
# bounds for 1/x + 1/(x+1) - 2 psi'(x+1); the x^-4 coefficient is -1
# (the printed -1/4 makes the lower bound false and breaks the quintic identity)
LOGMEAN_TRI_UPPER = _laurent([(3, _F(2, 3)), (4, -1), (5, _F(16, 15)), (6, -1), (7, _F(20, 21))])
LOGMEAN_TRI_LOWER = LOGMEAN_TRI_UPPER + _laurent([(8, -1)])
LOGMEAN_TRI_PRINTED_X4 = _F(-1, 4)

# Laurent parts of the bounds for 1/(x+1/2) - psi'(x+1); both also carry 1/(x+1/2)
MIDPOINT_TRI_UPPER = _laurent([(1, -1), (2, _F(1, 2)), (3, _F(-1, 6)), (5, _F(1, 30))])
MIDPOINT_TRI_LOWER = MIDPOINT_TRI_UPPER + _laurent([(7, _F(-1, 42))])
# bounds for psi(x+1) - ln(x+1/2)
MIDPOINT_PSI_LOWER = _laurent(
    [(2, _F(1, 24)), (3, _F(-1, 24)), (4, _F(23, 960)), (5, _F(-1, 160)), (6, _F(-11, 8064)), (7, _F(-1, 896))]
)
MIDPOINT_PSI_UPPER = MIDPOINT_PSI_LOWER + _laurent([(8, _F(143, 30720))])


def _strict_chain(
    report: VerificationReport,
    label: str,
    compute: Callable[[PrecisionConfig], Enclosure],
    lower: Fraction,
    upper: Fraction,
    cfg: PrecisionConfig,
    where: dict,
) -> Enclosure:
    value = None
    for level in range(cfg.max_refinements + 1):
        value = compute(cfg.refined(level))
        if value.strictly_inside(lower, upper):
            report.add(label, True)
            return value
        if value.hi <= lower or value.lo >= upper:
            break
    outside = value.hi <= lower or value.lo >= upper
    report.add(
        label,
        False if outside else None,
        {**where, "computed": _enc(value), "lower": _q(lower), "upper": _q(upper)},
    )
    return value


def verify_lemma2(
    samples: Sequence = DEFAULT_SAMPLES, cfg: PrecisionConfig = PrecisionConfig()
) -> VerificationReport:
    """Bracket 2psi(x+1) - ln(x(x+1)) and 1/x + 1/(x+1) - 2psi'(x+1) at sample points."""
    report = VerificationReport("lemma2")
    printed_failures = []
    for x in samples:
        x = Fraction(x)
        if x <= 0:
            raise ValueError("lemma samples must be positive")

        def psi_side(c: PrecisionConfig, x=x) -> Enclosure:
            return 2 * digamma_enclosure(x, c) - ln_enclosure(x * (x + 1), c)

        def tri_side(c: PrecisionConfig, x=x) -> Enclosure:
            exact = 1 / x + 1 / (x + 1)
            return Enclosure.exact(exact, c.bits) - 2 * trigamma_enclosure(x, c)

        _strict_chain(
            report, f"x={x}: lower < 2psi(x+1) - ln(x(x+1)) < upper",
            psi_side, LOGMEAN_PSI_LOWER(x), LOGMEAN_PSI_UPPER(x), cfg, {"x": _q(x)},
        )
        value = _strict_chain(
            report, f"x={x}: lower < 1/x + 1/(x+1) - 2psi'(x+1) < upper",
            tri_side, LOGMEAN_TRI_LOWER(x), LOGMEAN_TRI_UPPER(x), cfg, {"x": _q(x)},
        )
        shift = (LOGMEAN_TRI_PRINTED_X4 - LOGMEAN_TRI_UPPER.coefficient(-4)) / x**4
        if not value.certainly_greater(LOGMEAN_TRI_LOWER(x) + shift):
            printed_failures.append(_q(x))
    if printed_failures:
        report.findings.append(
            "trigamma chain as printed (-1/(4x^4)) has a false lower bound at x = "
            + ", ".join(printed_failures)
            + "; the coefficient -1/x^4 is used instead"
        )
    return report


def verify_lemma3(
    samples: Sequence = DEFAULT_SAMPLES, cfg: PrecisionConfig = PrecisionConfig()
) -> VerificationReport:
    """Bracket psi(x+1) - ln(x+1/2) and 1/(x+1/2) - psi'(x+1) at sample points."""
    report = VerificationReport("lemma3")
    for x in samples:
        x = Fraction(x)
        if x <= 0:
            raise ValueError("lemma samples must be positive")
        pole = 1 / (x + Fraction(1, 2))

        def tri_side(c: PrecisionConfig, x=x, pole=pole) -> Enclosure:
            return Enclosure.exact(pole, c.bits) - trigamma_enclosure(x, c)

        def psi_side(c: PrecisionConfig, x=x) -> Enclosure:
            return digamma_enclosure(x, c) - ln_enclosure(x + Fraction(1, 2), c)

        _strict_chain(
            report, f"x={x}: lower < 1/(x+1/2) - psi'(x+1) < upper",
            tri_side, pole + MIDPOINT_TRI_LOWER(x), pole + MIDPOINT_TRI_UPPER(x), cfg, {"x": _q(x)},
        )
        _strict_chain(
            report, f"x={x}: lower < psi(x+1) - ln(x+1/2) < upper",
            psi_side, MIDPOINT_PSI_LOWER(x), MIDPOINT_PSI_UPPER(x), cfg, {"x": _q(x)},
        )
    return report


# -- exact identities ----------------------------------------------------------

LAMBDA_QUINTIC = DensePolynomial.from_descending([798, -21693, -3654, 231, 1300, -2500])
LAMBDA_QUINTIC_DENOMINATOR = 33075
LAMBDA_QUOTIENT = DensePolynomial.from_descending([798, 651, 14574, 408303, 11433784])
LAMBDA_REMAINDER = 320143452

D_NUMERATOR = DensePolynomial(
    [
        -9018009, -31747716, -14007876, 59313792, 11454272, -129239296,
        119566592, 65630208, -701008896, -534417408, 178139136,
    ]
)
D_DENOMINATOR = 17340825600
D_QUOTIENT = DensePolynomial(
    [
        548963242092, 137248747452, 34315688832, 8564093760, 2138159872,
        566849792, 111820800, 11547648, 178139136, 178139136,
    ]
)
D_REMAINDER = 2195843950359


def _compare_polys(report: VerificationReport, label: str, got: DensePolynomial, want: DensePolynomial) -> None:
    if got == want:
        report.add(label, True)
        return
    n = max(len(got.coeffs), len(want.coeffs))
    k = next(i for i in range(n) if got[i] != want[i])
    report.add(label, False, {"power": k, "computed": _q(got[k]), "expected": _q(want[k])})


def _division_checks(
    report: VerificationReport,
    poly: DensePolynomial,
    root: int,
    quotient: DensePolynomial,
    remainder: int,
) -> None:
    q, r = poly_divmod_linear(poly, root)
    _compare_polys(report, f"quotient of division by (x - {root})", q, quotient)
    report.add(
        f"remainder of division by (x - {root}) is {remainder}",
        r == remainder,
        None if r == remainder else {"computed": _q(r), "expected": str(remainder)},
    )
    value = poly(Fraction(root))
    report.add(
        f"remainder theorem: numerator({root}) = {remainder}",
        value == remainder,
        None if value == remainder else {"computed": _q(value), "expected": str(remainder)},
    )
    rebuilt = q * DensePolynomial([-root, 1]) + r
    report.add(f"quotient*(x - {root}) + remainder reproduces the numerator", rebuilt == poly,
               None if rebuilt == poly else {"rebuilt": repr(rebuilt)})
    positive = all(c > 0 for c in q.coeffs) and r > 0
    report.add(
        f"numerator > 0 for x > {root} (positive quotient coefficients and remainder)",
        positive,
        None if positive else {"quotient": repr(q), "remainder": _q(r)},
    )


def verify_identity_lambda() -> VerificationReport:
    """Replay the rational-function computation in the lambda_n monotonicity proof."""
    report = VerificationReport("identity_lambda")
    x = LaurentPolynomial.x
    bound = LOGMEAN_TRI_LOWER - (x(1, 6) + 3) * LOGMEAN_PSI_UPPER * LOGMEAN_PSI_UPPER
    numerator = (bound * LAMBDA_QUINTIC_DENOMINATOR).shift(12)
    try:
        numerator_poly = numerator.to_polynomial()
    except ValueError:
        report.add("bound * 33075 x^12 is a polynomial", False, {"terms": repr(numerator)})
        return report
    _compare_polys(report, "A(x) - (6x+3) B(x)^2 = quintic / (33075 x^12)", numerator_poly, LAMBDA_QUINTIC)
    _division_checks(report, LAMBDA_QUINTIC, 28, LAMBDA_QUOTIENT, LAMBDA_REMAINDER)

    printed = LOGMEAN_TRI_LOWER + x(-4, LOGMEAN_TRI_PRINTED_X4 - LOGMEAN_TRI_UPPER.coefficient(-4))
    alt = ((printed - (x(1, 6) + 3) * LOGMEAN_PSI_UPPER**2) * LAMBDA_QUINTIC_DENOMINATOR).shift(12)
    if alt != LaurentPolynomial.from_polynomial(LAMBDA_QUINTIC):
        extra = alt - LaurentPolynomial.from_polynomial(LAMBDA_QUINTIC)
        report.findings.append(
            "with the printed -1/(4x^4) coefficient the numerator gains "
            + " + ".join(f"({_q(c)}) x^{e}" for e, c in extra.terms.items())
            + "; the quintic only follows from the coefficient -1/x^4"
        )
    return report


def verify_identity_d() -> VerificationReport:
    """Replay the rational-function computation in the d_n monotonicity proof."""
    report = VerificationReport("identity_d")
    x = LaurentPolynomial.x
    one_plus_2x = x(1, 2) + 1
    # (1+2x) [1/(x+1/2) + L(x)] = 2 + (1+2x) L(x);  48 (x+1/2)(1+2x) = 24 (1+2x)^2
    scaled = 2 + one_plus_2x * MIDPOINT_TRI_LOWER - 24 * one_plus_2x**2 * MIDPOINT_PSI_UPPER**2
    numerator = (scaled * D_DENOMINATOR).shift(16)
    try:
        numerator_poly = numerator.to_polynomial()
    except ValueError:
        report.add("bound * 17340825600 x^16 (1+2x) is a polynomial", False, {"terms": repr(numerator)})
        return report
    _compare_polys(
        report, "C(x) - 48(x+1/2) D(x)^2 = numerator / (17340825600 x^16 (1+2x))", numerator_poly, D_NUMERATOR
    )
    report.add(
        "numerator leading coefficient 178139136",
        numerator_poly.leading == 178139136,
        None if numerator_poly.leading == 178139136 else {"computed": _q(numerator_poly.leading)},
    )
    report.add(
        "numerator constant term -9018009",
        numerator_poly[0] == -9018009,
        None if numerator_poly[0] == -9018009 else {"computed": _q(numerator_poly[0])},
    )
    _division_checks(report, D_NUMERATOR, 4, D_QUOTIENT, D_REMAINDER)
    return report


# -- coefficient tables ------------------------------------------------------------

def verify_coefficient_tables(p_equiv: int = 20, p_sign: int = 40) -> VerificationReport:
    report = VerificationReport("coefficients")
    for p, printed in enumerate(RAMANUJAN_ENTRY9, start=1):
        got = ramanujan_coefficient(p)
        report.add(
            f"R_{p} = {_q(printed)}",
            got == printed,
            None if got == printed else {"p": p, "computed": _q(got), "expected": _q(printed)},
        )
    mismatch = None
    for p in range(1, p_equiv + 1):
        a, b, c = ramanujan_coefficient(p), ramanujan_coefficient_umbral(p), ramanujan_from_dw_transform(p)
        if not a == b == c:
            mismatch = {"p": p, "closed": _q(a), "umbral": _q(b), "dw_transform": _q(c)}
            break
    report.add(f"closed form = umbral form = DW transform for p <= {p_equiv}", mismatch is None, mismatch)
    for name, coeff in (("R", ramanujan_coefficient), ("D", detemple_wang_coefficient)):
        bad = [p for p in range(1, p_sign + 1) if (coeff(p) > 0) != (p % 2 == 1)]
        if bad:
            report.findings.append(f"sign of {name}_p is not (-1)^(p-1) for p = {bad}")
    return report


# -- sequences ---------------------------------------------------------------------

class _PointCache:
    """Sequence points per (which, n), upgraded in place when refined."""

    def __init__(self, which: str, cfg: PrecisionConfig, r: int | None = None):
        self.which, self.cfg, self.r = which, cfg, r
        self.points: dict[int, tuple[int, Enclosure]] = {}

    def get(self, n: int, level: int = 0) -> Enclosure:
        have = self.points.get(n)
        if have is None or have[0] < level:
            point = sequence_value(self.which, n, self.cfg.refined(level), r=self.r)
            have = (level, point.value)
            self.points[n] = have
        return have[1]


def _decide(
    test: Callable[[int], bool | None], cfg: PrecisionConfig
) -> tuple[bool | None, int]:
    """Run ``test(level)`` with growing refinement until it returns True/False."""
    result = None
    for level in range(cfg.max_refinements + 1):
        result = test(level)
        if result is not None:
            return result, level
    return None, cfg.max_refinements


def _range_check(
    report: VerificationReport,
    label: str,
    ns: Iterable[int],
    test: Callable[[int, int], bool | None],
    witness: Callable[[int, int], dict],
    cfg: PrecisionConfig,
) -> None:
    """One aggregated check: ``test(n, level)`` must prove True for every n."""
    for n in ns:
        result, level = _decide(lambda lv: test(n, lv), cfg)
        if result is not True:
            report.add(label, result, {"n": n, **witness(n, level)})
            return
    report.add(label, True)


def _inside(value: Enclosure, lower, upper) -> bool | None:
    if value.strictly_inside(lower, upper):
        return True
    if value.hi <= Enclosure.exact(lower, value.bits).lo or value.lo >= Enclosure.exact(upper, value.bits).hi:
        return False
    return None


LAMBDA_TABLE = {
    1: "1.1215093", 2: "1.1683646", 3: "1.1831718", 4: "1.1896217",
    5: "1.1929804", 6: "1.1949431", 7: "1.1961868", 8: "1.1970233",
    9: "1.1976125", 10: "1.1980429", 11: "1.1983668", 12: "1.1986165",
    13: "1.1988131", 14: "1.1989707", 15: "1.1990988", 16: "1.1992045",
    17: "1.1992926", 18: "1.1993668", 19: "1.1994300", 20: "1.1994842",
    21: "1.1995310", 22: "1.1995717", 23: "1.1996073", 24: "1.1996387",
    25: "1.1996664", 26: "1.1996911", 27: "1.1997131", 28: "1.1997329",
}
D_TABLE = {1: "3.73929752", 2: "4.08925414", 3: "4.13081174", 4: "4.15288035"}


def _table_agreement(report: VerificationReport, which: str, table: dict, tol: Fraction, cfg: PrecisionConfig, n_max: int) -> None:
    misses = []
    for n, printed in table.items():
        if n > n_max:
            continue
        value = sequence_value(which, n, cfg).value
        target = Fraction(printed)
        lo, hi = value.bounds()
        if not (target - tol <= lo and hi <= target + tol):
            misses.append(f"{which}_{n}: printed {printed}, computed {value.decimal_strings()[0][:14]}")
    if misses:
        report.findings.append(f"printed {which} values off by more than {tol}: " + "; ".join(misses))


def verify_monotone(which: str, n_max: int, cfg: PrecisionConfig = PrecisionConfig()) -> VerificationReport:
    """f_n strictly decreasing, lambda_n and d_n strictly increasing, for n <= n_max."""
    if which not in ("f", "lambda", "d"):
        raise ValueError("monotonicity is claimed for f, lambda and d only")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    report = VerificationReport(f"monotone_{which}")
    cache = _PointCache(which, cfg)
    increasing = which != "f"

    def test(n: int, level: int) -> bool | None:
        a, b = cache.get(n, level), cache.get(n + 1, level)
        lower, upper = (a, b) if increasing else (b, a)
        if lower.certainly_less(upper):
            return True
        if lower.lo >= upper.hi:
            return False
        return None

    def witness(n: int, level: int) -> dict:
        return {"value_n": _enc(cache.get(n, level)), "value_n+1": _enc(cache.get(n + 1, level))}

    direction = "increasing" if increasing else "decreasing"
    _range_check(report, f"{which}_n strictly {direction} for n = 1..{n_max}", range(1, n_max), test, witness, cfg)
    if which == "lambda":
        _table_agreement(report, "lambda", LAMBDA_TABLE, Fraction(5, 10**8), cfg, n_max)
    if which == "d":
        _table_agreement(report, "d", D_TABLE, Fraction(5, 10**9), cfg, n_max)
    return report


def _sharp_constants(cfg: PrecisionConfig) -> dict[str, Enclosure]:
    bits = cfg.bits + 32
    c = PrecisionConfig(bits)
    g = euler_gamma(c)
    one = Enclosure.exact(1, bits)
    return {
        "f": (one - g).reciprocal() - 2,
        "lambda": (one - g - ln_enclosure(2, c) * Fraction(1, 2)).reciprocal() - 12,
        "d": (one - ln_enclosure(Fraction(3, 2), c) - g).reciprocal() - 54,
    }


def verify_sharp_theorems(n_max: int, cfg: PrecisionConfig = PrecisionConfig()) -> VerificationReport:
    """Chen-Qi, Ramanujan-Lodge and DeTemple-Wang double inequalities for n <= n_max.

    Writing the residual as 1/(a_n + s_n) with s_n = f_n, lambda_n or d_n, each
    double inequality is equivalent to s_1 >= s_n > limit (f) or
    limit > s_n >= s_1 (lambda, d), with equality exactly at n = 1.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    report = VerificationReport("sharp")
    consts = _sharp_constants(cfg)
    # n = 1: the sequence definitions collapse onto the printed constants
    h1 = harmonic_exact(1)
    exact_ok = h1 == 1 and 2 * 1 == 2 and 6 * 1 * 2 == 12 and 24 * Fraction(3, 2) ** 2 == 54
    report.add(
        "n=1 equality: f_1 = 1/(1-gamma) - 2, lambda_1 = 1/(1-gamma-ln sqrt 2) - 12, "
        "d_1 = 1/(1-ln(3/2)-gamma) - 54 (H_1 = 1, ln 1 = 0, 6*1*2 = 12, 24(3/2)^2 = 54)",
        exact_ok,
        None if exact_ok else {"H_1": _q(h1)},
    )
    for which in ("f", "lambda", "d"):
        s1 = sequence_value(which, 1, cfg).value
        ok = s1.overlaps(consts[which])
        report.add(
            f"{which}_1 enclosure agrees with its closed-form constant",
            ok,
            None if ok else {"sequence": _enc(s1), "constant": _enc(consts[which])},
        )

    specs = [
        # (name, sequence, limit, sequence tends to limit from above?)
        ("Chen-Qi", "f", Fraction(1, 3), True),
        ("Ramanujan-Lodge", "lambda", Fraction(6, 5), False),
        ("DeTemple-Wang", "d", Fraction(21, 5), False),
    ]
    for name, which, limit, from_above in specs:
        cache = _PointCache(which, cfg)

        def strict_limit(n: int, level: int, cache=cache, limit=limit, from_above=from_above) -> bool | None:
            v = cache.get(n, level)
            return _inside(v, limit, 10**6) if from_above else _inside(v, -(10**6), limit)

        def strict_first(n: int, level: int, cache=cache, from_above=from_above) -> bool | None:
            v, first = cache.get(n, level), cache.get(1, level)
            if from_above:
                return True if v.certainly_less(first) else (False if v.lo >= first.hi else None)
            return True if v.certainly_greater(first) else (False if v.hi <= first.lo else None)

        def witness(n: int, level: int, cache=cache) -> dict:
            return {"value": _enc(cache.get(n, level)), "value_1": _enc(cache.get(1, level))}

        rel = ">" if from_above else "<"
        _range_check(report, f"{name}: {which}_n {rel} {limit} for n = 1..{n_max}",
                     range(1, n_max + 1), strict_limit, witness, cfg)
        rel1 = "<" if from_above else ">"
        _range_check(report, f"{name}: {which}_n {rel1} {which}_1 for n = 2..{n_max}",
                     range(2, n_max + 1), strict_first, witness, cfg)
    report.findings.append(
        "the DeTemple-Wang bound is printed with <= on the 21/5 side and < on the d_1 side; "
        "the equality at n = 1 is on the d_1 side and the 21/5 side is strict"
    )

    # rate of approach of d_n to 21/5
    n_tail = max(n_max, 100)
    half = Fraction(2 * n_tail + 1, 2)
    gap = Fraction(21, 5) - sequence_value("d", n_tail, cfg).value
    ratio = gap * (half**2 * Fraction(1400, 2071))
    ok = _inside(ratio, Fraction(99, 100), Fraction(101, 100))
    report.add(
        f"(21/5 - d_n) (n+1/2)^2 1400/2071 lies in (0.99, 1.01) at n = {n_tail}",
        ok,
        None if ok else {"n": n_tail, "ratio": _enc(ratio)},
    )
    printed = gap * (half * Fraction(2071, 1400))
    report.findings.append(
        f"the printed tail d_n ~ 21/5 - 1400/(2071(n+1/2)) does not match: at n = {n_tail}, "
        f"(21/5 - d_n)(n+1/2)2071/1400 = {printed.decimal_strings()[0][:10]}; "
        "the data fit 21/5 - 2071/(1400(n+1/2)^2)"
    )
    return report


# -- bracket and bounds suites ---------------------------------------------------

def verify_theta(n_values: Iterable[int], r_max: int = 10, cfg: PrecisionConfig = PrecisionConfig()) -> VerificationReport:
    """0 < Theta_r(n) < 1 for every n in ``n_values`` and r = 1..r_max."""
    report = VerificationReport("theta")
    ns = list(n_values)
    for r in range(1, r_max + 1):
        cache = _PointCache("theta", cfg, r)
        _range_check(
            report, f"0 < Theta_{r}(n) < 1 for {len(ns)} values of n (max {max(ns)})", ns,
            lambda n, lv, cache=cache: _inside(cache.get(n, lv), 0, 1),
            lambda n, lv, cache=cache: {"theta": _enc(cache.get(n, lv))}, cfg,
        )
    return report


def verify_cesaro(n_max: int, cfg: PrecisionConfig = PrecisionConfig()) -> VerificationReport:
    report = VerificationReport("cesaro")
    cache = _PointCache("c", cfg)
    _range_check(
        report, f"0 < c_n < 1 for n = 1..{n_max}", range(1, n_max + 1),
        lambda n, lv: _inside(cache.get(n, lv), 0, 1),
        lambda n, lv: {"c": _enc(cache.get(n, lv))}, cfg,
    )
    return report


def verify_lodge(n_max: int, cfg: PrecisionConfig = PrecisionConfig()) -> VerificationReport:
    """Lodge residual, rho_n, delta_n and 6/5 - lambda_n bounds for n = 1..n_max."""
    report = VerificationReport("lodge")
    bounds = [
        ("lodgeResidual", "0 < residual < 19/(25200 m^3)", lambda n: Fraction(19, 25200) / triangular(n) ** 3),
        ("rho", "0 < rho_n < 43/(84000 m^4)", lambda n: Fraction(43, 84000) / triangular(n) ** 4),
        ("delta", "0 < delta_n < 187969/4042500", lambda n: Fraction(187969, 4042500)),
        ("DeltaCap", "0 < 6/5 - lambda_n < 38/(175 n(n+1))", lambda n: Fraction(38, 175 * n * (n + 1))),
    ]
    for which, text, upper in bounds:
        cache = _PointCache(which, cfg)
        _range_check(
            report, f"{text} for n = 1..{n_max}", range(1, n_max + 1),
            lambda n, lv, cache=cache, upper=upper: _inside(cache.get(n, lv), 0, upper(n)),
            lambda n, lv, cache=cache, upper=upper: {"value": _enc(cache.get(n, lv)), "upper": _q(upper(n))},
            cfg,
        )
        if n_max >= 100:
            # the constants are approached: value / bound -> 1
            ratio = cache.get(n_max) / upper(n_max)
            ok = _inside(ratio, Fraction(99, 100), 1)
            report.add(
                f"{which}: value/bound at n = {n_max} lies in (0.99, 1) (bound is approached)",
                ok,
                None if ok else {"ratio": _enc(ratio)},
            )
    return report


# -- asymptotic error table ------------------------------------------------------------

TABLE_LABELS = {"Euler1": "over", "TothMare2": "under", "RamanujanLodge3": "over", "DeTempleWang4": "over"}
TABLE_N = {"Euler1": 10**4, "TothMare2": 10**4, "RamanujanLodge3": 10**3, "DeTempleWang4": 10**3}


def verify_error_table(cfg: PrecisionConfig = PrecisionConfig(), n_values: dict | None = None) -> VerificationReport:
    """|error| / tabulated estimate in [0.98, 1.02]; measured signs reported."""
    report = VerificationReport("table")
    n_values = n_values or TABLE_N
    for fid in TABLE_FORMULAS:
        n = n_values[fid]
        ratio = asymptotic_error_ratio(fid, n, cfg)
        ok = ratio.lo >= Fraction(98, 100) and ratio.hi <= Fraction(102, 100)
        report.add(f"{fid}: |error|/estimate at n = {n} in [0.98, 1.02]", ok,
                   None if ok else {"n": n, "ratio": _enc(ratio)})
        sign = eval_formula(fid, n, cfg).sign
        if sign != TABLE_LABELS[fid]:
            report.findings.append(
                f"{fid} is labelled '{TABLE_LABELS[fid]}estimates' but measured sign of "
                f"(formula - H_n) at n = {n} is '{sign}'"
            )
    return report


# -- suite dispatch ------------------------------------------------------------------

SUITES = ("oresme", "lemmas", "identities", "coefficients", "monotone", "sharp", "theta", "cesaro", "lodge", "table")


def run_suite(name: str, cfg: PrecisionConfig = PrecisionConfig(), n_max: int = 1000) -> VerificationReport:
    """Run one named suite; ``n_max`` bounds the sequence-based suites."""
    if name == "oresme":
        return verify_oresme(20)
    if name == "lemmas":
        report = VerificationReport("lemmas")
        report.extend(verify_lemma2(DEFAULT_SAMPLES, cfg))
        report.extend(verify_lemma3(DEFAULT_SAMPLES, cfg))
        return report
    if name == "identities":
        report = VerificationReport("identities")
        report.extend(verify_identity_lambda())
        report.extend(verify_identity_d())
        return report
    if name == "coefficients":
        return verify_coefficient_tables()
    if name == "monotone":
        report = VerificationReport("monotone")
        for which in ("f", "lambda", "d"):
            report.extend(verify_monotone(which, max(n_max, 2), cfg))
        return report
    if name == "sharp":
        return verify_sharp_theorems(max(n_max, 2), cfg)
    if name == "theta":
        ns = sorted(set(range(1, min(n_max, 100) + 1)) | {n_max})
        return verify_theta(ns, 10, cfg)
    if name == "cesaro":
        return verify_cesaro(n_max, cfg)
    if name == "lodge":
        return verify_lodge(n_max, cfg)
    if name == "table":
        return verify_error_table(cfg)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")
