"""The Lobachevsky function at rational multiples of pi.

Л(θ) = (1/2) sum_{k>=1} sin(2kθ) / k^2.  For θ = (a/b)π the sine values
repeat with period b in k, so the series splits into b shifted zeta sums.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .arith_kernel import HighPrecisionReal, iv_precision, shifted_power_sum
from .errors import BudgetExceeded
from .surd import SurdScalar, exact_sin_pi

GROUPED_PERIOD_LIMIT = 100
DIRECT_TERM_LIMIT = 10**7


@dataclass(frozen=True)
class LobachevskyRequest:
    """θ = (numerator / denominator) π."""

    numerator: int
    denominator: int
    target_digits: int = 20

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")

    @property
    def theta(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def _sine_table(theta: Fraction):
    """sin(2kθ) for k = 1..period as intervals; None marks an exact zero."""
    period = theta.denominator
    table = []
    for k in range(1, period + 1):
        x = 2 * k * theta
        if x.denominator == 1:
            table.append(None)
            continue
        try:
            value = exact_sin_pi(x.numerator, x.denominator)
            a, b, c, e = (iv.mpf(t.numerator) / t.denominator for t in value.coefficients)
            table.append(a + b * iv.sqrt(2) + c * iv.sqrt(3) + e * iv.sqrt(6))
        except ValueError:
            table.append(iv.sin(iv.pi * x.numerator / x.denominator))
    return period, table


def exact_sine_terms(theta: Fraction, count: int) -> list[SurdScalar]:
    """sin(2kθ) for k = 1..count over Q(sqrt2, sqrt3); raises if outside that field."""
    out = []
    for k in range(1, count + 1):
        x = 2 * k * theta
        out.append(exact_sin_pi(x.numerator, x.denominator))
    return out


def lobachevsky(req: LobachevskyRequest) -> HighPrecisionReal:
    digits = req.target_digits
    with iv_precision(digits):
        period, table = _sine_table(req.theta)
        if period <= GROUPED_PERIOD_LIMIT:
            total = iv.mpf(0)
            for r, s in enumerate(table, start=1):
                if s is not None:
                    total += s * shifted_power_sum(r, period, 2, digits + 2)
        else:
            # sum_{k>N} k^-2 <= 1/N, halved by the factor 1/2 in front
            N = 10 ** (digits + 1) // 2
            if N > DIRECT_TERM_LIMIT:
                raise BudgetExceeded(
                    f"period {period} > {GROUPED_PERIOD_LIMIT} forces direct summation, "
                    f"which needs {N} terms for {digits} digits"
                )
            total = iv.mpf(0)
            for k in range(1, N + 1):
                s = table[(k - 1) % period]
                if s is not None:
                    total += s / (iv.mpf(k) ** 2)
            tail = (iv.mpf(1) / N).b
            total += iv.mpf([-tail, tail])
        return HighPrecisionReal.from_interval(total / 2)


def vol_p3_via_lobachevsky(target_digits: int = 20) -> HighPrecisionReal:
    """(5/16) Л(π/3), the volume of the [4,3,6] orthoscheme."""
    value = lobachevsky(LobachevskyRequest(1, 3, target_digits + 1))
    with iv_precision(target_digits):
        return HighPrecisionReal.from_interval(value.interval() * 5 / 16)


def check_character_identity(limit: int = 1000) -> bool:
    """sin(2kπ/3) == (sqrt3/2)(-3/k) exactly for k = 1..limit."""
    from .numtheory import kronecker

    half_root3 = SurdScalar(0, 0, Fraction(1, 2))
    return all(
        s == half_root3 * kronecker(-3, k)
        for k, s in enumerate(exact_sine_terms(Fraction(1, 3), limit), start=1)
    )
