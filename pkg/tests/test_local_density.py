import itertools
from fractions import Fraction

import numpy as np
import pytest

from lorentz_covol.errors import BudgetExceeded
from lorentz_covol.local_density import (
    alpha,
    bad_prime_factor,
    beta,
    brute_force_count,
    closed_form_count,
    count_orthogonal,
    default_budget,
    dickson_order,
    e8_closed_form,
    e_p2_p3_closed_form,
    gamma,
    good_prime_count,
)
from lorentz_covol.numtheory import QFormSpec
from lorentz_covol.surd import SurdScalar


def naive_count(diagonal, q):
    """Check every matrix over Z/q; feasible only for q^(m^2) up to a few million."""
    m = len(diagonal)
    S = np.diag(diagonal)
    entries = np.array(list(itertools.product(range(q), repeat=m * m)), dtype=np.int64).reshape(-1, m, m)
    gram = np.einsum("kji,jl,klm->kim", entries, S, entries)
    diff = (gram - S) % q
    total = int(np.all(diff.reshape(len(entries), -1) == 0, axis=1).sum())
    return total


@pytest.mark.parametrize(
    "diagonal, q",
    [
        ((1, -3), 8),
        ((1, -3), 9),
        ((1, -5), 25),
        ((1, -1), 12),
        ((1, 1, -3), 2),
        ((1, 1, -3), 3),
        ((1, 1, -5), 4),
        ((1, 1, 1, -3), 2),
    ],
)
def test_counter_matches_naive_enumeration(diagonal, q):
    assert count_orthogonal(diagonal, q).count == naive_count(diagonal, q)


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("d", [1, 3, 5, 7, 15])
def test_e8_closed_form_matches_brute_force(n, d):
    spec = QFormSpec.make(n, d)
    assert brute_force_count(spec, 8).count == e8_closed_form(spec).count


def test_e8_for_n3_d3():
    # three columns of norm 1 and one of norm -3 over Z/8, counted independently above
    assert e8_closed_form(QFormSpec.make(3, 3)).count == 3145728


def test_alpha_values():
    assert [alpha(n) for n in (1, 2, 3)] == [2, 6, 48]


@pytest.mark.parametrize("n", range(0, 12))
def test_beta_gamma_are_integers(n):
    # 2^(n-2) + 2^((n-2)/2) cos(n pi/4) is an integer once n >= 2
    if n >= 2:
        assert beta(n).is_rational() and beta(n).to_fraction().denominator == 1
    assert gamma(n).is_rational() and gamma(n).to_fraction().denominator == 1


@pytest.mark.parametrize("n, p", [(1, 3), (2, 3), (2, 5), (3, 3), (3, 5), (4, 3)])
def test_dickson_order_matches_brute_force(n, p):
    assert dickson_order(n, p) == count_orthogonal((1,) * n, p).count


@pytest.mark.parametrize("n, d, p", [(2, 3, 3), (2, 5, 5), (2, 15, 3), (2, 15, 5), (3, 3, 3)])
def test_e_p2_closed_form(n, d, p):
    spec = QFormSpec.make(n, d)
    e2, e3 = e_p2_p3_closed_form(spec, p)
    assert brute_force_count(spec, p * p).count == e2
    assert e3 == p ** (n * (n + 1) // 2) * e2


@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("d, p", [(1, 3), (3, 5), (3, 7), (5, 3), (7, 11)])
def test_good_prime_count(n, d, p):
    spec = QFormSpec.make(n, d)
    if p ** (n + 1) > 10**6:
        pytest.skip("grid too large for a unit test")
    assert brute_force_count(spec, p).count == good_prime_count(spec, p)


def test_good_prime_rejects_bad_prime():
    with pytest.raises(ValueError):
        good_prime_count(QFormSpec.make(2, 3), 3)


@pytest.mark.parametrize("n, d", [(2, 1), (2, 3), (3, 3), (2, 5), (3, 1), (4, 1), (2, 15)])
def test_bad_prime_factor_closed_equals_brute(n, d):
    spec = QFormSpec.make(n, d)
    for p in (2, *spec.prime_factors_of_d):
        closed = bad_prime_factor(spec, p)
        brute = bad_prime_factor(spec, p, provenance="brute_force")
        assert closed.value == brute.value, (p, closed, brute)


def test_bad_prime_factor_two_for_n3_d3():
    assert bad_prime_factor(QFormSpec.make(3, 3), 2).value == Fraction(1, 6)


def test_multiplicativity_72():
    spec = QFormSpec.make(2, 5)
    assert brute_force_count(spec, 72).count == brute_force_count(spec, 8).count * brute_force_count(spec, 9).count


@pytest.mark.parametrize("n, d, q", [(2, 5, 72), (2, 3, 72), (2, 1, 40), (3, 1, 24), (2, 3, 16), (2, 3, 27)])
def test_closed_form_count_matches_brute(n, d, q):
    spec = QFormSpec.make(n, d)
    assert closed_form_count(spec, q) == brute_force_count(spec, q).count


def test_closed_form_count_uncovered():
    spec = QFormSpec.make(2, 3)
    assert closed_form_count(spec, 4) is None
    assert closed_form_count(spec, 3) is None


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        count_orthogonal((1, 1, -5), 125, budget=10)


def test_grid_limit():
    with pytest.raises(BudgetExceeded):
        count_orthogonal((1, 1, 1, 1, -3), 49)


def test_default_budget_env(monkeypatch):
    monkeypatch.setenv("LORENTZ_COVOL_BUDGET", "1000")
    assert default_budget() == 1000
    with pytest.raises(BudgetExceeded):
        count_orthogonal((1, 1, -5), 125)
    monkeypatch.setenv("LORENTZ_COVOL_BUDGET", "lots")
    with pytest.raises(ValueError):
        default_budget()
    monkeypatch.delenv("LORENTZ_COVOL_BUDGET")
    assert default_budget() == 10**9


def test_local_factor_validation():
    spec = QFormSpec.make(2, 3)
    with pytest.raises(ValueError):
        bad_prime_factor(spec, 5)
    with pytest.raises(ValueError):
        bad_prime_factor(spec, 3, provenance="guess")
