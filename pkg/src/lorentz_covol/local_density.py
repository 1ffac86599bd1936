"""Local factors of the Siegel product for S = diag(1, ..., 1, -d).

Closed forms live next to an exhaustive counter so that each one can be
checked against the definition: E_q(S) is the number of A over Z/q with
A^t S A = S.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import _frames
from .arith_kernel import SymbolicVolume, zeta_even
from .errors import BudgetExceeded, NonIntegerResult, NonRationalResult
from .numtheory import QFormSpec, fundamental_discriminant, is_prime, kronecker_two, legendre
from .surd import SurdScalar, cos_quarter_pi, sqrt2_power

DEFAULT_BUDGET = 10**9


def default_budget() -> int:
    raw = os.environ.get("LORENTZ_COVOL_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(float(raw))
    except ValueError as exc:
        raise ValueError(f"LORENTZ_COVOL_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("LORENTZ_COVOL_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class CountResult:
    q: int
    count: int
    nodes_explored: int = 0


@dataclass(frozen=True)
class LocalFactor:
    """The factor 2 p^(a n(n+1)/2) / E_{p^a}(S) for one prime."""

    prime: int
    exponent_used: int
    value: Fraction
    provenance: str  # "closed_form" or "brute_force"

    def __post_init__(self):
        if self.value <= 0:
            raise ValueError("local factors are positive")
        if self.provenance not in ("closed_form", "brute_force"):
            raise ValueError(f"unknown provenance {self.provenance!r}")


# --------------------------------------------------------------------------
# exhaustive counting
# --------------------------------------------------------------------------


def count_orthogonal(diagonal, q: int, budget: int | None = None) -> CountResult:
    """Number of A over Z/q with A^t D A = D for D = diag(diagonal)."""
    if q < 2:
        raise ValueError("modulus q must be >= 2")
    budget = default_budget() if budget is None else budget
    diagonal = [int(x) for x in diagonal]
    if q ** len(diagonal) > _frames.MAX_GRID:
        raise BudgetExceeded(
            f"q^{len(diagonal)} = {q ** len(diagonal)} vectors exceeds the enumeration limit "
            f"{_frames.MAX_GRID}"
        )
    try:
        count, nodes = _frames.count_frames(diagonal, q, budget)
    except _frames._Budget as exc:
        raise BudgetExceeded(
            f"search for q={q}, diagonal={diagonal} passed {exc.nodes} nodes (budget {budget})"
        ) from None
    return CountResult(q, count, nodes)


def brute_force_count(spec: QFormSpec, q: int, budget: int | None = None) -> CountResult:
    return count_orthogonal(spec.diagonal, q, budget)


def brute_force_feasible(spec: QFormSpec, q: int) -> bool:
    return q ** (spec.n + 1) <= _frames.MAX_GRID


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------


def _eps2(k: int) -> int:
    return 1 if k % 2 == 0 else 0


def alpha(n: int) -> int:
    if n < 1:
        raise ValueError("alpha needs n >= 1")
    out = 1
    for k in range(1, n + 1):
        out *= 2**k - _eps2(k)
    return out


def beta(n: int) -> SurdScalar:
    """2^(n-2) + 2^((n-2)/2) cos(n pi/4), exact."""
    return SurdScalar.coerce(Fraction(2) ** (n - 2)) + sqrt2_power(n - 2) * cos_quarter_pi(n)


def gamma(n: int) -> SurdScalar:
    """2^n + 2^(n/2) cos(n pi/4), exact."""
    return SurdScalar.coerce(2**n) + sqrt2_power(n) * cos_quarter_pi(n)


def alpha_beta_gamma(n: int) -> tuple[int, Callable[[int], SurdScalar], Callable[[int], SurdScalar]]:
    return alpha(n), beta, gamma


def _exact_int_quotient(num: int, den: SurdScalar, what: str) -> int:
    if not den.is_rational():
        raise NonIntegerResult(f"{what}: divisor {den} is irrational")
    q = Fraction(num) / den.to_fraction()
    if q.denominator != 1:
        raise NonIntegerResult(f"{what}: {num} / {den} = {q} is not an integer")
    return q.numerator


def e8_closed_form(spec: QFormSpec) -> CountResult:
    n = spec.n
    top = 2 ** (n * n + 2 * n + 2) * alpha(n)
    divisor = beta(n + 1) if spec.d % 4 == 3 else gamma(n - 1)
    return CountResult(8, _exact_int_quotient(top, divisor, f"E_8 for n={n}, d={spec.d}"))


def dickson_order(n: int, p: int) -> int:
    """Order of the orthogonal group of x_1^2 + ... + x_n^2 over Z/p, p odd."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"dickson_order needs an odd prime, got {p}")
    if n < 1:
        raise ValueError("dickson_order needs n >= 1")
    if n % 2:
        out = 2
        for k in range(1, n):
            out *= p**k - _eps2(k)
        return out
    h = n // 2
    out = 2 * p ** (h - 1) * (p**h - legendre(-1, p) ** h)
    for k in range(1, n - 1):
        out *= p**k - _eps2(k)
    return out


def e_p2_p3_closed_form(spec: QFormSpec, p: int) -> tuple[int, int]:
    if p == 2 or spec.d % p:
        raise ValueError(f"p={p} must be an odd prime dividing d={spec.d}")
    n = spec.n
    e2 = 2 * p ** ((n + 1) * (n + 2) // 2) * dickson_order(n, p)
    return e2, p ** (n * (n + 1) // 2) * e2


def good_prime_count(spec: QFormSpec, p: int) -> int:
    """E_p(S) for a prime p not dividing 2d."""
    if p == 2 or not is_prime(p) or spec.d % p == 0:
        raise ValueError(f"p={p} must be an odd prime not dividing d={spec.d}")
    n = spec.n
    factor = Fraction(1)
    for k in range(1, n // 2 + 1):
        factor *= 1 - Fraction(1, p ** (2 * k))
    if n % 2:
        D = fundamental_discriminant(spec).D
        chi = legendre(D, p)
        factor *= 1 - Fraction(chi, p ** ((n + 1) // 2))
    value = 2 * p ** (n * (n + 1) // 2) * factor
    if value.denominator != 1:
        raise NonIntegerResult(f"E_{p} for n={n}, d={spec.d} came out as {value}")
    return value.numerator


def _bad_two_closed(spec: QFormSpec) -> Fraction:
    from .arith_kernel import c_function

    n = spec.n
    num = sqrt2_power(n - 1) + c_function(n, spec.d)
    den = sqrt2_power(n + 3)
    for k in range(1, n // 2 + 1):
        den = den * (1 - Fraction(1, 4**k))
    value = num / den
    if not value.is_rational():
        raise NonRationalResult(f"2-adic factor for n={n}, d={spec.d} is {value}")
    return value.to_fraction()


def _bad_odd_closed(spec: QFormSpec, p: int) -> Fraction:
    n = spec.n
    prod = Fraction(1)
    for k in range(1, n // 2 + 1):
        prod *= 1 - Fraction(1, p ** (2 * k))
    if n % 2:
        return 1 / (2 * p * prod)
    h = n // 2
    return Fraction(p**h + legendre(-1, p) ** h, 2 * p ** (h + 1)) / prod


def bad_prime_factor(
    spec: QFormSpec, p: int, provenance: str = "closed_form", budget: int | None = None
) -> LocalFactor:
    """Local factor at a prime p dividing 2d.

    ``provenance="brute_force"`` counts E_q(S) directly: q = 8 for p = 2 and
    q = p^3 for odd p when the grid fits in memory, otherwise q = p^2 with
    E_{p^3} = p^(n(n+1)/2) E_{p^2}.
    """
    if (2 * spec.d) % p or not is_prime(p):
        raise ValueError(f"p={p} must be a prime dividing 2d = {2 * spec.d}")
    n = spec.n
    half = n * (n + 1) // 2
    if provenance == "closed_form":
        value = _bad_two_closed(spec) if p == 2 else _bad_odd_closed(spec, p)
        return LocalFactor(p, 3, value, "closed_form")
    if provenance != "brute_force":
        raise ValueError(f"unknown provenance {provenance!r}")
    if p == 2 or brute_force_feasible(spec, p**3):
        a = 3
    else:
        a = 2
    q = p**a
    count = brute_force_count(spec, q, budget).count
    return LocalFactor(p, a, Fraction(2 * q**half, count), "brute_force")


def good_prime_factor_product(spec: QFormSpec) -> SymbolicVolume:
    """Product over p not dividing 2d of 2p^(n(n+1)/2)/E_p(S), in closed form."""
    n = spec.n
    bad = [2, *spec.prime_factors_of_d]
    out = SymbolicVolume(Fraction(1))
    for k in range(1, n // 2 + 1):
        local = Fraction(1)
        for p in bad:
            local *= 1 - Fraction(1, p ** (2 * k))
        out = out * zeta_even(k) * local
    if n % 2:
        D = fundamental_discriminant(spec).D
        s = (n + 1) // 2
        two = 1 - Fraction(kronecker_two(D), 2**s)
        out = out * SymbolicVolume(two, l_factor=(s, D), l_power=1)
    return out


def closed_form_count(spec: QFormSpec, q: int) -> int | None:
    """E_q(S) from the closed forms, or None when some prime power is not covered.

    E_q is multiplicative in q.  Prime powers are covered for q = 8 (and 2^a,
    a >= 3), p^a with a >= 2 for p | d, and p^a with a >= 1 for p not dividing 2d;
    beyond the first covered exponent each extra power of p multiplies by
    p^(n(n+1)/2).
    """
    from .numtheory import factorize

    if q < 2:
        raise ValueError("modulus q must be >= 2")
    n = spec.n
    half = n * (n + 1) // 2
    total = 1
    for p, a in factorize(q).items():
        if p == 2:
            if a < 3:
                return None
            total *= e8_closed_form(spec).count * 2 ** ((a - 3) * half)
        elif spec.d % p == 0:
            if a < 2:
                return None
            total *= e_p2_p3_closed_form(spec, p)[0] * p ** ((a - 2) * half)
        else:
            total *= good_prime_count(spec, p) * p ** ((a - 1) * half)
    return total
