from fractions import Fraction

import mpmath
import pytest

from lorentz_covol.errors import BudgetExceeded
from lorentz_covol.lobachevsky import (
    LobachevskyRequest,
    check_character_identity,
    exact_sine_terms,
    lobachevsky,
    vol_p3_via_lobachevsky,
)


def clausen_oracle(theta):
    mpmath.mp.dps = 40
    return mpmath.clsin(2, 2 * mpmath.pi * theta.numerator / theta.denominator) / 2


@pytest.mark.parametrize("a, b", [(1, 3), (1, 4), (1, 6), (1, 12), (2, 5), (1, 7), (3, 8), (5, 12), (-1, 3), (4, 3)])
def test_matches_clausen(a, b):
    val = lobachevsky(LobachevskyRequest(a, b, 20))
    assert val.error_bound < mpmath.mpf("1e-20")
    assert abs(val.value - clausen_oracle(Fraction(a, b))) < mpmath.mpf("1e-20")


def test_pi_over_three():
    val = lobachevsky(LobachevskyRequest(1, 3, 12))
    assert mpmath.nstr(val.value, 10) == "0.3383138688"


def test_vol_p3():
    assert mpmath.nstr(vol_p3_via_lobachevsky(12).value, 10) == "0.105723084"


@pytest.mark.parametrize("a, b", [(1, 5), (1, 8), (2, 7)])
def test_duplication_formula(a, b):
    # Л(2θ) = 2Л(θ) + 2Л(θ + π/2)
    th = Fraction(a, b)
    lhs = lobachevsky(LobachevskyRequest((2 * th).numerator, (2 * th).denominator, 20)).value
    t2 = th + Fraction(1, 2)
    rhs = 2 * lobachevsky(LobachevskyRequest(a, b, 20)).value + 2 * lobachevsky(
        LobachevskyRequest(t2.numerator, t2.denominator, 20)
    ).value
    assert abs(lhs - rhs) < mpmath.mpf("1e-18")


def test_zero_at_multiples_of_half_pi():
    for a, b in ((0, 1), (1, 2), (1, 1)):
        assert abs(lobachevsky(LobachevskyRequest(a, b, 15)).value) < mpmath.mpf("1e-15")


def test_large_period_direct_summation():
    val = lobachevsky(LobachevskyRequest(3, 101, 5))
    assert abs(val.value - clausen_oracle(Fraction(3, 101))) <= val.error_bound + mpmath.mpf("1e-30")


def test_large_period_budget():
    with pytest.raises(BudgetExceeded):
        lobachevsky(LobachevskyRequest(3, 101, 12))


def test_character_identity():
    assert check_character_identity(1000)


def test_exact_sine_terms_outside_field():
    with pytest.raises(ValueError):
        exact_sine_terms(Fraction(1, 5), 3)


def test_request_validation():
    with pytest.raises(ValueError):
        LobachevskyRequest(1, 0)
