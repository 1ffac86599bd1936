from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from lorentz_covol.surd import (
    SurdScalar,
    cos_quarter_pi,
    exact_cos_pi_over,
    exact_sin_pi,
    format_surd,
    parse_surd,
    sqrt2_power,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
surds = st.builds(SurdScalar, fractions, fractions, fractions, fractions)


def approx(x: SurdScalar):
    a, b, c, e = (mpmath.mpf(t.numerator) / t.denominator for t in x.coefficients)
    return a + b * mpmath.sqrt(2) + c * mpmath.sqrt(3) + e * mpmath.sqrt(6)


@given(surds, surds)
def test_field_operations_match_floats(x, y):
    mpmath.mp.dps = 30
    assert mpmath.almosteq(approx(x + y), approx(x) + approx(y), 1e-20)
    assert mpmath.almosteq(approx(x * y), approx(x) * approx(y), 1e-20, 1e-20)
    if not y.is_zero():
        assert x / y * y == x


@given(surds)
def test_sign_matches_numeric_value(x):
    v = approx(x)
    if x.is_zero():
        assert x.sign() == 0
    else:
        assert x.sign() == (1 if v > 0 else -1)


@pytest.mark.parametrize("den", [1, 2, 3, 4, 6, 12])
def test_exact_sin_matches_mpmath(den):
    for num in range(-2 * den, 2 * den + 1):
        exact = exact_sin_pi(num, den)
        assert mpmath.almosteq(approx(exact), mpmath.sin(mpmath.pi * num / den), 1e-25, 1e-25)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 6, 12])
def test_exact_cos_matches_mpmath(m):
    assert mpmath.almosteq(approx(exact_cos_pi_over(m)), mpmath.cos(mpmath.pi / m), 1e-25, 1e-25)


def test_sin_outside_field_raises():
    with pytest.raises(ValueError):
        exact_sin_pi(1, 5)


def test_sqrt2_power_and_cos_quarter():
    assert sqrt2_power(4) == SurdScalar(4)
    assert sqrt2_power(3) == SurdScalar(0, 2)
    assert sqrt2_power(-1) == SurdScalar(0, Fraction(1, 2))
    assert [cos_quarter_pi(k) for k in (0, 2, 4)] == [SurdScalar(1), SurdScalar(0), SurdScalar(-1)]
    assert cos_quarter_pi(1) * cos_quarter_pi(1) == SurdScalar(Fraction(1, 2))


@pytest.mark.parametrize(
    "text, value",
    [
        ("1/2*sqrt(3)", SurdScalar(0, 0, Fraction(1, 2))),
        ("-sqrt(1/2)", SurdScalar(0, Fraction(-1, 2))),
        ("sqrt(3/2)", SurdScalar(0, 0, 0, Fraction(1, 2))),
        ("-3/4", SurdScalar(Fraction(-3, 4))),
        ("2*sqrt(8)", SurdScalar(0, 4)),
    ],
)
def test_parse_surd(text, value):
    assert parse_surd(text) == value


@given(fractions, st.sampled_from([1, 2, 3, 6]))
def test_format_parse_round_trip(c, r):
    x = SurdScalar(*[c if k == [1, 2, 3, 6].index(r) else 0 for k in range(4)])
    assert parse_surd(format_surd(x)) == x


def test_parse_rejects_outside_field():
    with pytest.raises(ValueError):
        parse_surd("sqrt(5)")
    with pytest.raises(ValueError):
        parse_surd("1/2*")
