import json
from fractions import Fraction
from math import comb

import pytest

from harmonic_expansions.coefficients import (
    RAMANUJAN_ENTRY9,
    coefficient_series,
    detemple_wang_coefficient,
    euler_term,
    ramanujan_coefficient,
    ramanujan_coefficient_umbral,
    ramanujan_from_dw_transform,
)
from harmonic_expansions.exactmath import bernoulli_number

PRINTED = [
    Fraction(1, 12),
    Fraction(-1, 120),
    Fraction(1, 630),
    Fraction(-1, 1680),
    Fraction(1, 2310),
    Fraction(-191, 360360),
    Fraction(29, 30030),
    Fraction(-2833, 1166880),
    Fraction(140051, 17459442),
]


def ramanujan_by_series_reversion(p_max: int) -> list[Fraction]:
    """Oracle: R_p from the Euler expansion in 1/n rewritten in powers of 1/m.

    Uses H_n - ln n - gamma = 1/(2n) - sum B_2j/(2j n^2j), then
    1/2 ln(2m) - ln n = 1/2 ln(1 + 1/n), and solves for the coefficients of
    1/m^p by matching the expansions in t = 1/n with 1/m = 2t^2/(1+t).
    """
    order = 2 * p_max + 2

    def mul(a, b):
        out = [Fraction(0)] * (order + 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b[: order + 1 - i]):
                    out[i + j] += x * y
        return out

    # target(t) = H_n - 1/2 ln(2m) - gamma as a series in t
    target = [Fraction(0)] * (order + 1)
    target[1] = Fraction(1, 2)
    for j in range(1, order // 2 + 1):
        target[2 * j] -= bernoulli_number(2 * j) / (2 * j)
    for k in range(1, order + 1):  # minus 1/2 ln(1 + t)
        target[k] -= Fraction((-1) ** (k + 1), 2 * k)
    # u = 1/m = 2t^2 / (1 + t)
    u = [Fraction(0)] * (order + 1)
    for k in range(2, order + 1):
        u[k] = 2 * (-1) ** (k - 2)
    coeffs = []
    power = [Fraction(1)] + [Fraction(0)] * order
    powers = []
    for p in range(1, p_max + 1):
        power = mul(power, u)
        powers.append(power)
    residual = target[:]
    for p in range(1, p_max + 1):
        c = residual[2 * p] / powers[p - 1][2 * p]
        coeffs.append(c)
        residual = [r - c * q for r, q in zip(residual, powers[p - 1])]
    return coeffs


def test_printed_table_is_recorded_verbatim():
    assert list(RAMANUJAN_ENTRY9) == PRINTED


@pytest.mark.parametrize("p, want", list(enumerate(PRINTED, 1)))
def test_closed_form_matches_printed(p, want):
    assert ramanujan_coefficient(p) == want


@pytest.mark.parametrize("p", [1, 2, 5])
def test_umbral_examples(p):
    assert ramanujan_coefficient_umbral(p) == PRINTED[p - 1]


@pytest.mark.parametrize("p", [1, 3, 7])
def test_transform_examples(p):
    assert ramanujan_from_dw_transform(p) == PRINTED[p - 1]


def test_three_forms_agree_to_40():
    for p in range(1, 41):
        r = ramanujan_coefficient(p)
        assert ramanujan_coefficient_umbral(p) == r
        assert ramanujan_from_dw_transform(p) == r


def test_closed_form_matches_series_reversion():
    assert [ramanujan_coefficient(p) for p in range(1, 13)] == ramanujan_by_series_reversion(12)


@pytest.mark.parametrize("p, want", [(1, Fraction(1, 24)), (2, Fraction(-7, 960)), (3, Fraction(31, 8064))])
def test_detemple_wang_examples(p, want):
    assert detemple_wang_coefficient(p) == want


def test_detemple_wang_zero_index():
    with pytest.raises(ZeroDivisionError):
        detemple_wang_coefficient(0)


@pytest.mark.parametrize("bad", [0, -3])
def test_ramanujan_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        ramanujan_coefficient(bad)


def test_signs_alternate():
    for p in range(1, 41):
        sign = 1 if p % 2 else -1
        assert ramanujan_coefficient(p) * sign > 0
        assert detemple_wang_coefficient(p) * sign > 0


@pytest.mark.parametrize("k, want", [(1, (1, Fraction(1, 2))), (2, (2, Fraction(-1, 12))), (3, (4, Fraction(1, 120))), (4, (6, Fraction(-1, 252)))])
def test_euler_terms(k, want):
    assert euler_term(k) == want


def test_series_serialization():
    series = coefficient_series("ramanujan", 9)
    assert series.values() == PRINTED
    rows = json.loads(series.to_json())
    assert rows[5] == {"p": 6, "value": "-191/360360"}
    lines = series.to_csv().splitlines()
    assert lines[0] == "index,numerator,denominator"
    assert lines[6] == "6,-191,360360"
    euler = coefficient_series("euler", 3)
    assert euler.to_rows()[2] == {"p": 3, "exponent": 4, "value": "1/120"}
    assert euler.to_csv().splitlines()[0] == "index,exponent,numerator,denominator"


def test_series_rejects_bad_input():
    with pytest.raises(ValueError):
        coefficient_series("ramanujan", 0)
    with pytest.raises(ValueError):
        coefficient_series("stirling", 3)


def test_dw_transform_binomial_weights():
    # the s = 0 term would carry C(p-1, p) = 0
    assert all(comb(p - 1, p) == 0 for p in range(1, 10))
