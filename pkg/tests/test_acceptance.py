"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from fractions import Fraction

import pytest

from harmonic_expansions.approximations import asymptotic_error_ratio, eval_formula, sequence_value, theta_r
from harmonic_expansions.coefficients import (
    ramanujan_coefficient,
    ramanujan_coefficient_umbral,
    ramanujan_from_dw_transform,
)
from harmonic_expansions.exactmath import harmonic_exact
from harmonic_expansions.precision import (
    Enclosure,
    PrecisionConfig,
    digamma_enclosure,
    euler_gamma,
    ln_enclosure,
    trigamma_enclosure,
)
from harmonic_expansions.verification import (
    D_TABLE,
    LAMBDA_TABLE,
    verify_cesaro,
    verify_identity_d,
    verify_identity_lambda,
    verify_lodge,
    verify_monotone,
    verify_oresme,
    verify_sharp_theorems,
)

CFG = PrecisionConfig(128)
N_BIG = 10**4
# mpmath, 60 significant digits
GAMMA_50 = Fraction("0.57721566490153286060651209008240243104215933593992")


def criterion_1():
    printed = [
        Fraction(1, 12), Fraction(-1, 120), Fraction(1, 630), Fraction(-1, 1680), Fraction(1, 2310),
        Fraction(-191, 360360), Fraction(29, 30030), Fraction(-2833, 1166880), Fraction(140051, 17459442),
    ]
    start = time.perf_counter()
    ramanujan_coefficient.cache_clear()
    got = [ramanujan_coefficient(p) for p in range(1, 10)]
    elapsed = time.perf_counter() - start
    bad = [p for p, (g, w) in enumerate(zip(got, printed), 1) if g != w]
    return not bad and elapsed < 1, f"mismatches={bad} time={elapsed:.3f}s (< 1 s)"


def criterion_2():
    start = time.perf_counter()
    for fn in (ramanujan_coefficient, ramanujan_coefficient_umbral, ramanujan_from_dw_transform):
        fn.cache_clear()
    bad = [
        p for p in range(1, 21)
        if not ramanujan_coefficient(p) == ramanujan_coefficient_umbral(p) == ramanujan_from_dw_transform(p)
    ]
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 5, f"disagreements={bad} time={elapsed:.3f}s (< 5 s)"


def criterion_3():
    start = time.perf_counter()
    cases = [(n, r) for n in range(1, 101) for r in range(1, 11)] + [(1000, r) for r in range(1, 11)]
    outside = []
    lo_min, hi_max = Fraction(1), Fraction(0)
    for n, r in cases:
        enc = theta_r(n, r, CFG)
        lo, hi = enc.bounds()
        lo_min, hi_max = min(lo_min, lo), max(hi_max, hi)
        if not enc.strictly_inside(0, 1):
            outside.append((n, r))
    elapsed = time.perf_counter() - start
    detail = (
        f"{len(cases)} cases, outside={outside[:5]} range=[{float(lo_min):.4f}, {float(hi_max):.7f}] "
        f"time={elapsed:.1f}s (< 60 s)"
    )
    return not outside and elapsed < 60, detail


def criterion_4():
    lam_bad, lam_err = [], Fraction(0)
    for n, printed in LAMBDA_TABLE.items():
        lo, hi = sequence_value("lambda", n, CFG).value.bounds()
        err = max(abs(lo - Fraction(printed)), abs(hi - Fraction(printed)))
        lam_err = max(lam_err, err)
        if err > Fraction(5, 10**8):
            lam_bad.append(n)
    d_bad, d_err = [], Fraction(0)
    for n, printed in D_TABLE.items():
        lo, hi = sequence_value("d", n, CFG).value.bounds()
        err = max(abs(lo - Fraction(printed)), abs(hi - Fraction(printed)))
        d_err = max(d_err, err)
        if err > Fraction(5, 10**9):
            d_bad.append(n)
    detail = (
        f"lambda_1..28 max|diff|={float(lam_err):.2e} (<= 5e-8) off={lam_bad}; "
        f"d_1..4 max|diff|={float(d_err):.2e} (<= 5e-9) off={d_bad}"
    )
    return not lam_bad and not d_bad, detail


def criterion_5():
    bits = 128
    c = PrecisionConfig(bits)
    g = euler_gamma(c)
    one = Enclosure.exact(1, bits)
    consts = [
        ("1/(1-gamma)-2", (one - g).reciprocal() - 2, "0.3652721"),
        ("1/(1-gamma-ln sqrt2)-12", (one - g - ln_enclosure(2, c) * Fraction(1, 2)).reciprocal() - 12, "1.12150934"),
        ("1/(1-ln(3/2)-gamma)-54", (one - ln_enclosure(Fraction(3, 2), c) - g).reciprocal() - 54, "3.73929752"),
    ]
    parts, ok = [], True
    for name, enc, printed in consts:
        digits = len(printed.split(".")[1])
        half_ulp = Fraction(1, 2 * 10**digits)
        lo, hi = enc.bounds()
        # the printed decimal is the value rounded to its last shown digit
        agrees = Fraction(printed) - half_ulp < lo and hi < Fraction(printed) + half_ulp
        narrow = hi - lo < Fraction(1, 10**10)
        ok &= agrees and narrow
        parts.append(f"{name}: [{enc.decimal_strings()[0][:14]}..] width={float(hi - lo):.1e} matches {printed}={agrees}")
    return ok, "; ".join(parts)


def _timed_report(fn, *args):
    start = time.perf_counter()
    report = fn(*args)
    return report, time.perf_counter() - start


def criterion_6():
    total, parts, ok = 0.0, [], True
    for which in ("f", "lambda", "d"):
        report, elapsed = _timed_report(verify_monotone, which, N_BIG, CFG)
        total += elapsed
        ok &= report.passed
        parts.append(f"{which}:{'proved' if report.passed else [c.status for c in report.checks]}")
    return ok and total < 120, f"{', '.join(parts)} n=1..{N_BIG} time={total:.1f}s (< 120 s)"


def criterion_7():
    report, elapsed = _timed_report(verify_sharp_theorems, N_BIG, CFG)
    failed = [c.label for c in report.checks if c.status != "proved"]
    return report.passed, f"{len(report.checks)} checks, failed={failed} n=2..{N_BIG} time={elapsed:.1f}s"


def criterion_8():
    cesaro, t1 = _timed_report(verify_cesaro, N_BIG, CFG)
    lodge, t2 = _timed_report(verify_lodge, N_BIG, CFG)
    failed = [c.label for c in cesaro.checks + lodge.checks if c.status != "proved"]
    return cesaro.passed and lodge.passed, f"failed={failed} n=1..{N_BIG} time={t1 + t2:.1f}s"


def criterion_9():
    cases = [("Euler1", 10**4), ("TothMare2", 10**4), ("RamanujanLodge3", 10**3), ("DeTempleWang4", 10**3)]
    ok, parts = True, []
    for formula, n in cases:
        ratio = asymptotic_error_ratio(formula, n, CFG)
        inside = Fraction(98, 100) <= ratio.bounds()[0] and ratio.bounds()[1] <= Fraction(102, 100)
        ok &= inside
        parts.append(f"{formula}@{n}: {float(ratio.midpoint()):.5f}")
    sign = eval_formula("TothMare2", 10**4, CFG).sign
    return ok, "; ".join(parts) + f"; TothMare2 measured sign: {sign} (table label: under)"


def criterion_10():
    lam, d = verify_identity_lambda(), verify_identity_d()
    failed = [c.label for c in lam.checks + d.checks if c.status != "proved"]
    return lam.passed and d.passed, f"{len(lam.checks) + len(d.checks)} exact checks, failed={failed}"


def criterion_11():
    eps = Fraction(1, 10**49)
    gamma_ball = Enclosure.between(GAMMA_50 - eps, GAMMA_50 + eps, 256)
    not_contained = []
    for n in range(1, 201):
        exact = Enclosure.exact(harmonic_exact(n), 256) - gamma_ball
        if not digamma_enclosure(n, CFG).contains(exact):
            not_contained.append(n)
    rng = random.Random(20241018)
    not_nested = []
    for name, op in (("ln", ln_enclosure), ("digamma", digamma_enclosure), ("trigamma", trigamma_enclosure)):
        for _ in range(50):
            x = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**4))
            if not op(x, PrecisionConfig(256)).subset_of(op(x, PrecisionConfig(128))):
                not_nested.append((name, x))
    gamma_nested = euler_gamma(PrecisionConfig(256)).subset_of(euler_gamma(CFG))
    ok = not not_contained and not not_nested and gamma_nested
    return ok, f"H_n - gamma outside for n={not_contained[:5]}; nesting failures={not_nested[:3]} (150 random inputs)"


def criterion_12():
    report = verify_oresme(20)
    return report.passed, f"{len(report.checks)} exact comparisons k=2..20"


CRITERIA = [
    (1, "coefficient goldens", criterion_1),
    (2, "coefficient equivalence p <= 20", criterion_2),
    (3, "Theta_r strictly inside (0,1)", criterion_3),
    (4, "lambda and d table reproduction", criterion_4),
    (5, "sharp constants", criterion_5),
    (6, "monotonicity to 10^4", criterion_6),
    (7, "double inequalities to 10^4", criterion_7),
    (8, "bounds suite to 10^4", criterion_8),
    (9, "asymptotic error ratios", criterion_9),
    (10, "exact identity replay", criterion_10),
    (11, "enclosure soundness and nesting", criterion_11),
    (12, "Oresme bound", criterion_12),
]


def evaluate(number: int, title: str, fn) -> tuple[bool, str]:
    ok, detail = fn()
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
    return ok, line


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, line = evaluate(number, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
