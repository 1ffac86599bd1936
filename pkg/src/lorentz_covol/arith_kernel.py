"""Exact rational building blocks and error-bounded numerics.

Everything symbolic is held as ``Fraction`` plus integer exponents of pi,
a square-free radicand and an optional Dirichlet L-value.  Numerics go through
mpmath's interval context so that every reported error bound is proven.
"""

from __future__ import annotations

import contextlib
import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

import mpmath
from mpmath import iv

from .numtheory import factorize
from .surd import SurdScalar, cos_quarter_pi

DEFAULT_DIGITS = 30
GUARD_DIGITS = 10

_iv_lock = threading.RLock()


@contextlib.contextmanager
def iv_precision(digits: int):
    """Run a block with mpmath's interval context set to ``digits`` + guard digits."""
    with _iv_lock:
        saved = iv.prec
        iv.prec = max(saved, int((digits + GUARD_DIGITS) * 3.33) + 8)
        try:
            yield
        finally:
            iv.prec = saved


# --------------------------------------------------------------------------
# Bernoulli numbers, zeta(2k), the product B(n), gamma factors, C(n, d)
# --------------------------------------------------------------------------

_bernoulli_table: list[Fraction] = [Fraction(1), Fraction(-1, 2)]
_bernoulli_lock = threading.Lock()


def _extend_bernoulli(m: int) -> None:
    with _bernoulli_lock:
        B = _bernoulli_table
        for k in range(len(B), m + 1):
            if k % 2 == 1:
                B.append(Fraction(0))
                continue
            s = sum(comb(k + 1, j) * B[j] for j in range(k))
            B.append(-s / (k + 1))


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m for even m >= 2."""
    if not isinstance(m, int) or m < 2 or m % 2:
        raise ValueError(f"bernoulli expects an even integer m >= 2, got {m!r}")
    if m >= len(_bernoulli_table):
        _extend_bernoulli(m)
    return _bernoulli_table[m]


def double_factorial(k: int) -> int:
    """k!! with the conventions (-1)!! = 0!! = 1."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def b_function(n: int) -> Fraction:
    """Product over k = 1..floor(n/2) of |B_2k| / (2k)."""
    if n < 2:
        raise ValueError("b_function needs n >= 2")
    out = Fraction(1)
    for k in range(1, n // 2 + 1):
        out *= abs(bernoulli(2 * k)) / (2 * k)
    return out


class GammaProduct(NamedTuple):
    """prod_{k<=n} pi^(-k/2) Gamma(k/2) = coefficient * pi^pi_power / double_factorial_divisor."""

    coefficient: Fraction
    pi_power: int
    double_factorial_divisor: int

    def as_symbolic(self) -> "SymbolicVolume":
        return SymbolicVolume(self.coefficient / self.double_factorial_divisor, self.pi_power)


def gamma_factor_product(n: int) -> GammaProduct:
    if n < 2:
        raise ValueError("gamma_factor_product needs n >= 2")
    coeff = Fraction(1)
    pi_power = 0
    top = (n - 1) // 2 if n % 2 else n // 2
    for k in range(1, top + 1):
        coeff *= Fraction(2 * math.factorial(2 * k - 1), 2 ** (2 * k))
        pi_power -= 2 * k
    divisor = 1
    if n % 2 == 0:
        coeff *= 2 ** (n // 2)
        pi_power += n // 2
        divisor = double_factorial(n - 1)
    return GammaProduct(coeff, pi_power, divisor)


def c_function(n: int, d: int) -> SurdScalar:
    """cos((n + (-1)^((d+1)/2)) pi / 4), exact."""
    if d % 2 == 0:
        raise ValueError("c_function needs odd d")
    sign = 1 if ((d + 1) // 2) % 2 == 0 else -1
    return cos_quarter_pi(n + sign)


# --------------------------------------------------------------------------
# Error-bounded reals
# --------------------------------------------------------------------------


def _endpoints(x) -> tuple[mpmath.mpf, mpmath.mpf]:
    lo, hi = x._mpi_
    return mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)


@dataclass(frozen=True)
class HighPrecisionReal:
    """A real number known to lie in [value - error_bound, value + error_bound]."""

    value: mpmath.mpf
    error_bound: mpmath.mpf

    @classmethod
    def from_interval(cls, x) -> "HighPrecisionReal":
        lo, hi = _endpoints(x)
        with mpmath.workprec(max(mpmath.mp.prec, iv.prec) + 10):
            mid = (lo + hi) / 2
        # round the radius up through the interval context
        with _iv_lock:
            saved = iv.prec
            iv.prec = max(saved, 64)
            try:
                r1 = iv.mpf(hi) - iv.mpf(mid)
                r2 = iv.mpf(mid) - iv.mpf(lo)
                rad = max(_endpoints(r1)[1], _endpoints(r2)[1])
            finally:
                iv.prec = saved
        return cls(mid, rad)

    @classmethod
    def exact(cls, x) -> "HighPrecisionReal":
        if isinstance(x, Fraction):
            return cls.from_interval(iv.mpf(x.numerator) / x.denominator)
        return cls(mpmath.mpf(x), mpmath.mpf(0))

    def interval(self):
        v = iv.mpf(self.value)
        e = iv.mpf(self.error_bound)
        return iv.mpf([(v - e).a, (v + e).b])

    @property
    def lower(self) -> mpmath.mpf:
        return _endpoints(self.interval())[0]

    @property
    def upper(self) -> mpmath.mpf:
        return _endpoints(self.interval())[1]

    def contains(self, x) -> bool:
        return self.lower <= mpmath.mpf(x) <= self.upper

    def overlaps(self, other: "HighPrecisionReal") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def within(self, other: "HighPrecisionReal") -> bool:
        """True when this interval lies inside ``other``."""
        return other.lower <= self.lower and self.upper <= other.upper

    def _binary(self, other, op):
        a = self.interval()
        b = other.interval() if isinstance(other, HighPrecisionReal) else _to_iv(other)
        return HighPrecisionReal.from_interval(op(a, b))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __abs__(self):
        return HighPrecisionReal(abs(self.value), self.error_bound)

    def __float__(self):
        return float(self.value)

    def to_string(self, digits: int = 10) -> str:
        return mpmath.nstr(self.value, digits, min_fixed=1, max_fixed=0)

    def __str__(self):
        return f"{mpmath.nstr(self.value, 20)} +- {mpmath.nstr(self.error_bound, 3)}"


def _to_iv(x):
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / x.denominator
    if isinstance(x, SurdScalar):
        a, b, c, e = (iv.mpf(t.numerator) / t.denominator for t in x.coefficients)
        return a + b * iv.sqrt(2) + c * iv.sqrt(3) + e * iv.sqrt(6)
    return iv.mpf(x)


def shifted_power_sum(a: int, step: int, s: int, digits: int):
    """Interval enclosure of sum_{m>=0} (a + m*step)^(-s) for integers a, step >= 1, s >= 2.

    Direct summation of the first N terms, then Euler-Maclaurin for the tail
    with M correction terms.  The remainder is bounded by the size of the
    last correction term, which is valid because every even derivative of
    (a + x*step)^(-s) is positive on [N, inf).  Must be called inside
    :func:`iv_precision`.
    """
    if s < 2 or a < 1 or step < 1:
        raise ValueError("shifted_power_sum needs a, step >= 1 and s >= 2")
    target = iv.mpf(10) ** (-(digits + 2))
    M = max(4, int(digits * 3.33 / 4) + 4)
    N = max(8, 2 * M + s)
    while True:
        direct = iv.mpf(0)
        for m in range(N):
            direct += iv.mpf(a + m * step) ** (-s)
        X = iv.mpf(a + N * step)
        tail = X ** (1 - s) / ((s - 1) * step) + X ** (-s) / 2
        # f^(k)(N) = (-1)^k (s)_k step^k X^(-s-k)
        rising = iv.mpf(s)  # (s)_1
        last = None
        for j in range(1, M + 1):
            k = 2 * j - 1
            if j > 1:
                rising *= (s + k - 2) * (s + k - 1)
            deriv = -rising * iv.mpf(step) ** k * X ** (-s - k)
            b2j = bernoulli(2 * j)
            term = iv.mpf(b2j.numerator) / b2j.denominator / math.factorial(2 * j) * deriv
            tail -= term
            last = term
        bound = abs(last).b
        total = direct + tail + iv.mpf([-bound, bound])
        if bound < target.a or N > 10**5:
            return total
        N *= 2


# --------------------------------------------------------------------------
# Symbolic volumes
# --------------------------------------------------------------------------


def _squarefree_part(k: int) -> tuple[int, int]:
    """k = f^2 * s with s square-free; returns (s, f)."""
    s = 1
    f = 1
    for p, e in factorize(k).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, f


@dataclass(frozen=True)
class SymbolicVolume:
    """coefficient * pi^pi_power * sqrt(sqrt_arg) * L(s, D)^l_power."""

    coefficient: Fraction
    pi_power: int = 0
    sqrt_arg: int = 1
    l_factor: tuple[int, int] | None = None
    l_power: int | None = None

    def __post_init__(self):
        coeff = Fraction(self.coefficient)
        if self.sqrt_arg < 1:
            raise ValueError("sqrt_arg must be a positive integer")
        s, f = _squarefree_part(self.sqrt_arg)
        coeff *= f
        l_factor, l_power = self.l_factor, self.l_power
        if l_power is None:
            l_power = 0 if l_factor is None else 1
        if l_factor is None:
            l_power = 0
        if l_power == 0:
            l_factor = None
        if coeff == 0:
            s, l_factor, l_power = 1, None, 0
        object.__setattr__(self, "coefficient", coeff)
        object.__setattr__(self, "sqrt_arg", s)
        object.__setattr__(self, "l_factor", None if l_factor is None else tuple(l_factor))
        object.__setattr__(self, "l_power", l_power)

    @classmethod
    def coerce(cls, x) -> "SymbolicVolume":
        if isinstance(x, SymbolicVolume):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        if isinstance(x, SurdScalar):
            nz = [(c, r) for c, r in zip(x.coefficients, (1, 2, 3, 6)) if c]
            if not nz:
                return cls(Fraction(0))
            if len(nz) == 1:
                return cls(nz[0][0], sqrt_arg=nz[0][1])
        raise TypeError(f"cannot express {x!r} as a single symbolic monomial")

    def is_rational(self) -> bool:
        return self.pi_power == 0 and self.sqrt_arg == 1 and self.l_factor is None

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self.render()} is not rational")
        return self.coefficient

    def __mul__(self, other):
        try:
            o = SymbolicVolume.coerce(other)
        except TypeError:
            return NotImplemented
        if self.l_factor and o.l_factor and self.l_factor != o.l_factor:
            raise ValueError("products of distinct L-values are not representable")
        l_factor = self.l_factor or o.l_factor
        g = math.gcd(self.sqrt_arg, o.sqrt_arg)
        radicand = (self.sqrt_arg // g) * (o.sqrt_arg // g)
        return SymbolicVolume(
            self.coefficient * o.coefficient * g,
            self.pi_power + o.pi_power,
            radicand,
            l_factor,
            self.l_power + o.l_power,
        )

    __rmul__ = __mul__

    def inverse(self) -> "SymbolicVolume":
        if self.coefficient == 0:
            raise ZeroDivisionError("inverse of a zero volume")
        return SymbolicVolume(
            1 / (self.coefficient * self.sqrt_arg),
            -self.pi_power,
            self.sqrt_arg,
            self.l_factor,
            -self.l_power,
        )

    def __truediv__(self, other):
        try:
            o = SymbolicVolume.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return SymbolicVolume.coerce(other) * self.inverse()

    def __neg__(self):
        return self * -1

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        out = SymbolicVolume(Fraction(1))
        for _ in range(abs(e)):
            out = out * base
        return out

    def numeric(self, digits: int = DEFAULT_DIGITS) -> HighPrecisionReal:
        """Evaluate with a proven absolute error bound of at most 10^-digits."""
        from .dirichlet import l_series_interval

        work = digits
        target = mpmath.mpf(10) ** (-digits)
        while True:
            with iv_precision(work):
                x = iv.mpf(self.coefficient.numerator) / self.coefficient.denominator
                if self.pi_power:
                    x *= iv.pi ** self.pi_power
                if self.sqrt_arg != 1:
                    x *= iv.sqrt(self.sqrt_arg)
                if self.l_factor is not None:
                    s, D = self.l_factor
                    x *= l_series_interval(s, D, work) ** self.l_power
                out = HighPrecisionReal.from_interval(x)
            if out.error_bound <= target:
                return out
            work += 10

    # -- text form --------------------------------------------------------

    def render(self) -> str:
        """Canonical text in the grammar integers, /, *, sqrt(k), pi^k, L(s,D)."""
        c = self.coefficient
        num = str(c.numerator)
        if self.sqrt_arg != 1:
            num = f"sqrt({self.sqrt_arg})" if c.numerator == 1 else f"{num}*sqrt({self.sqrt_arg})"
        if c.denominator != 1:
            head = f"({num}/{c.denominator})"
        elif self.sqrt_arg != 1:
            head = f"({num})"
        else:
            head = num
        factors = [head]
        if self.pi_power:
            factors.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        if self.l_factor is not None:
            s, D = self.l_factor
            factors.append(f"L({s},{D})" if self.l_power == 1 else f"L({s},{D})^{self.l_power}")
        if len(factors) > 1 and factors[0] == "1":
            factors = factors[1:]
        return "*".join(factors)

    def __str__(self):
        return self.render()

    @classmethod
    def parse(cls, text: str) -> "SymbolicVolume":
        return _SymbolicParser(text).parse()


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(sqrt|pi|L)|(\^|\*|/|\(|\)|,|-))")


class _SymbolicParser:
    """Recursive descent over: expr := factor (('*'|'/') factor)*."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"unexpected character at {pos} in {self.text!r}")
            self.tokens.append(next(g for g in m.groups() if g is not None))
            pos = m.end()
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self, expected=None):
        tok = self._peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'token'}, found {tok!r} in {self.text!r}")
        self.i += 1
        return tok

    def _int(self) -> int:
        sign = -1 if self._peek() == "-" and self._take("-") else 1
        tok = self._take()
        if not tok.isdigit():
            raise ValueError(f"expected integer, found {tok!r} in {self.text!r}")
        return sign * int(tok)

    def parse(self) -> SymbolicVolume:
        out = self._expr()
        if self._peek() is not None:
            raise ValueError(f"trailing input {self._peek()!r} in {self.text!r}")
        return out

    def _expr(self) -> SymbolicVolume:
        out = self._factor()
        while self._peek() in ("*", "/"):
            op = self._take()
            rhs = self._factor()
            out = out * rhs if op == "*" else out / rhs
        return out

    def _factor(self) -> SymbolicVolume:
        if self._peek() == "-":
            self._take()
            return -self._factor()
        base = self._atom()
        if self._peek() == "^":
            self._take()
            base = base ** self._int()
        return base

    def _atom(self) -> SymbolicVolume:
        tok = self._take()
        if tok.isdigit():
            return SymbolicVolume(Fraction(int(tok)))
        if tok == "pi":
            return SymbolicVolume(Fraction(1), 1)
        if tok == "sqrt":
            self._take("(")
            k = self._int()
            self._take(")")
            return SymbolicVolume(Fraction(1), sqrt_arg=k)
        if tok == "L":
            self._take("(")
            s = self._int()
            self._take(",")
            D = self._int()
            self._take(")")
            return SymbolicVolume(Fraction(1), l_factor=(s, D), l_power=1)
        if tok == "(":
            inner = self._expr()
            self._take(")")
            return inner
        raise ValueError(f"unexpected token {tok!r} in {self.text!r}")


def zeta_even(k: int) -> SymbolicVolume:
    """zeta(2k) = r * pi^(2k) with r = 2^(2k) |B_2k| / (2 (2k)!)."""
    if k < 1:
        raise ValueError("zeta_even needs k >= 1")
    r = Fraction(2 ** (2 * k)) * abs(bernoulli(2 * k)) / (2 * math.factorial(2 * k))
    return SymbolicVolume(r, 2 * k)
