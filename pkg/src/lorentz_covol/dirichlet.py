"""Rigorous evaluation of L(s, D) = sum_k (D/k) k^(-s) for integers s >= 2."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import mpmath
from mpmath import iv

from .arith_kernel import HighPrecisionReal, iv_precision, shifted_power_sum
from .errors import BudgetExceeded
from .numtheory import Discriminant, kronecker, primes_up_to

DIRECT_TERM_LIMIT = 10**7


@dataclass(frozen=True)
class LValueRequest:
    s: int
    D: int
    target_digits: int = 30

    def __post_init__(self):
        if self.s < 2:
            raise ValueError(f"L(s, D) is only evaluated for integer s >= 2, got s={self.s}")
        Discriminant(self.D)
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")


def _grouped(s: int, D: int, digits: int):
    """Sum over residue classes r mod |D|; each class is a shifted zeta tail."""
    period = abs(D)
    total = iv.mpf(0)
    for r in range(1, period + 1):
        chi = kronecker(D, r)
        if chi:
            total += chi * shifted_power_sum(r, period, s, digits + 2)
    return total


def _direct(s: int, D: int, digits: int):
    """Plain partial sum with the tail bound N^(1-s)/(s-1)."""
    # smallest N with N^(1-s)/(s-1) <= 10^-(digits+1)
    N = math.ceil((10 ** (digits + 1) / (s - 1)) ** (1 / (s - 1)))
    if N > DIRECT_TERM_LIMIT:
        raise BudgetExceeded(
            f"direct summation of L({s},{D}) to {digits} digits needs {N} terms "
            f"(limit {DIRECT_TERM_LIMIT})"
        )
    total = iv.mpf(0)
    for k in range(1, N):
        chi = kronecker(D, k)
        if chi:
            total += chi * iv.mpf(k) ** (-s)
    tail = (iv.mpf(N) ** (1 - s) / (s - 1)).b
    return total + iv.mpf([-tail, tail])


@functools.lru_cache(maxsize=256)
def _cached_interval(s: int, D: int, digits: int, method: str):
    with iv_precision(digits):
        x = _grouped(s, D, digits) if method == "grouped" else _direct(s, D, digits)
        return x._mpi_


def l_series_interval(s: int, D: int, digits: int, method: str = "grouped"):
    """Interval enclosure of L(s, D); call inside :func:`iv_precision`."""
    LValueRequest(s, D, digits)
    if method not in ("grouped", "direct"):
        raise ValueError(f"unknown method {method!r}")
    raw = _cached_interval(s, D, digits, method)
    return _from_raw(raw)


def _from_raw(raw):
    lo, hi = raw
    return iv.mpf([mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)])


def l_series(req: LValueRequest, method: str = "grouped") -> HighPrecisionReal:
    """L(s, D) with error_bound <= 10^-target_digits.

    ``grouped`` (default) splits the series into the |D| residue classes and
    sums each with an Euler-Maclaurin tail.  ``direct`` uses partial sums and
    the bound N^(1-s)/(s-1); it is only practical for low precision.
    """
    with iv_precision(req.target_digits):
        x = l_series_interval(req.s, req.D, req.target_digits, method)
        return HighPrecisionReal.from_interval(x)


def l_euler_product(req: LValueRequest, prime_bound: int) -> HighPrecisionReal:
    """Truncated Euler product over p <= prime_bound.

    The error bound covers the missing primes: for p > B the log of each
    factor is at most (4/3) p^(-s), and sum_{k > B} k^(-s) <= B^(1-s)/(s-1),
    so the relative error is at most exp(T) - 1 with T = (4/3) B^(1-s)/(s-1).
    """
    if prime_bound < 2:
        raise ValueError("prime_bound must be >= 2")
    s, D = req.s, req.D
    with iv_precision(req.target_digits):
        prod = iv.mpf(1)
        for p in primes_up_to(prime_bound):
            chi = kronecker(D, p)
            if chi:
                prod /= 1 - chi * iv.mpf(p) ** (-s)
        T = iv.mpf(4) / 3 * iv.mpf(prime_bound) ** (1 - s) / (s - 1)
        rel = (iv.exp(T) - 1).b
        prod *= 1 + iv.mpf([-rel, rel])
        return HighPrecisionReal.from_interval(prod)
