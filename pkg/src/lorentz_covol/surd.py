"""Exact arithmetic in the biquadratic field Q(sqrt 2, sqrt 3).

Elements are stored over the basis (1, sqrt2, sqrt3, sqrt6) with Fraction
coefficients.  This is enough for every cosine of pi/m with m in
{1, 2, 3, 4, 6}, for the period-8 table of cos(k*pi/4), and for all entries of
the Lorentz-normal fixtures shipped in ``data/``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Union

import mpmath

Rational = Union[int, Fraction]

_RADICALS = (1, 2, 3, 6)


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, f) with n = f**2 * s and s square-free, for n >= 1."""
    f = 1
    s = 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            f *= k
        if n % k == 0:
            n //= k
            s *= k
        k += 1
    return s * n, f


class SurdScalar:
    """a + b*sqrt2 + c*sqrt3 + e*sqrt6 with rational a, b, c, e."""

    __slots__ = ("coefficients",)

    def __init__(self, a: Rational = 0, b: Rational = 0, c: Rational = 0, e: Rational = 0):
        self.coefficients = (Fraction(a), Fraction(b), Fraction(c), Fraction(e))

    @classmethod
    def coerce(cls, x: "SurdScalar | Rational") -> "SurdScalar":
        if isinstance(x, SurdScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot interpret {x!r} as an element of Q(sqrt2, sqrt3)")

    @classmethod
    def sqrt_of_rational(cls, r: Rational) -> "SurdScalar":
        """Exact square root of a non-negative rational, if it lies in the field."""
        r = Fraction(r)
        if r < 0:
            raise ValueError(f"square root of negative rational {r}")
        if r == 0:
            return cls()
        s, f = _squarefree_split(r.numerator * r.denominator)
        if s not in _RADICALS:
            raise ValueError(f"sqrt({r}) does not lie in Q(sqrt2, sqrt3)")
        coeff = Fraction(f, r.denominator)
        out = [Fraction(0)] * 4
        out[_RADICALS.index(s)] = coeff
        return cls(*out)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        try:
            o = SurdScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return SurdScalar(*(x + y for x, y in zip(self.coefficients, o.coefficients)))

    __radd__ = __add__

    def __neg__(self):
        return SurdScalar(*(-x for x in self.coefficients))

    def __sub__(self, other):
        try:
            o = SurdScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return SurdScalar.coerce(other) - self

    def __mul__(self, other):
        try:
            o = SurdScalar.coerce(other)
        except TypeError:
            return NotImplemented
        a1, b1, c1, e1 = self.coefficients
        a2, b2, c2, e2 = o.coefficients
        return SurdScalar(
            a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * e1 * e2,
            a1 * b2 + b1 * a2 + 3 * (c1 * e2 + e1 * c2),
            a1 * c2 + c1 * a2 + 2 * (b1 * e2 + e1 * b2),
            a1 * e2 + e1 * a2 + b1 * c2 + c1 * b2,
        )

    __rmul__ = __mul__

    def _conj2(self) -> "SurdScalar":
        a, b, c, e = self.coefficients
        return SurdScalar(a, -b, c, -e)

    def _conj3(self) -> "SurdScalar":
        a, b, c, e = self.coefficients
        return SurdScalar(a, b, -c, -e)

    def inverse(self) -> "SurdScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt2, sqrt3)")
        y = self * self._conj2()  # lies in Q(sqrt3)
        z = y * y._conj3()  # rational
        return (self._conj2() * y._conj3()).scale(1 / z.coefficients[0])

    def scale(self, r: Rational) -> "SurdScalar":
        r = Fraction(r)
        return SurdScalar(*(x * r for x in self.coefficients))

    def __truediv__(self, other):
        try:
            o = SurdScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return SurdScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = SurdScalar(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- comparison and inspection ---------------------------------------

    def __eq__(self, other):
        try:
            o = SurdScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.coefficients == o.coefficients

    def __hash__(self):
        a, b, c, e = self.coefficients
        if b == c == e == 0:
            return hash(a)
        return hash(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0]

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            a, b, c, e = (mpmath.mpf(x.numerator) / x.denominator for x in self.coefficients)
            return a + b * mpmath.sqrt(2) + c * mpmath.sqrt(3) + e * mpmath.sqrt(6)

    def __float__(self):
        a, b, c, e = self.coefficients
        return float(a) + float(b) * math.sqrt(2) + float(c) * math.sqrt(3) + float(e) * math.sqrt(6)

    def sign(self) -> int:
        """Exact sign: -1, 0 or +1."""
        if self.is_zero():
            return 0
        # a nonzero element of small height cannot be this close to zero
        v = self.to_mpf(80)
        if abs(v) < mpmath.mpf(10) ** -60:
            raise ArithmeticError(f"cannot certify the sign of {self}")
        return 1 if v > 0 else -1

    def __lt__(self, other):
        return (self - SurdScalar.coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - SurdScalar.coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - SurdScalar.coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - SurdScalar.coerce(other)).sign() >= 0

    def __repr__(self):
        return f"SurdScalar({self})"

    def __str__(self):
        parts = []
        for coeff, rad in zip(self.coefficients, _RADICALS):
            if coeff == 0:
                continue
            if rad == 1:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(f"sqrt({rad})")
            elif coeff == -1:
                parts.append(f"-sqrt({rad})")
            else:
                parts.append(f"{coeff}*sqrt({rad})")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")


SQRT2 = SurdScalar(0, 1)
SQRT3 = SurdScalar(0, 0, 1)

# cos(k*pi/4) for k = 0..7
_COS_QUARTER_PI = (
    SurdScalar(1),
    SurdScalar(0, Fraction(1, 2)),
    SurdScalar(0),
    SurdScalar(0, Fraction(-1, 2)),
    SurdScalar(-1),
    SurdScalar(0, Fraction(-1, 2)),
    SurdScalar(0),
    SurdScalar(0, Fraction(1, 2)),
)


def cos_quarter_pi(k: int) -> SurdScalar:
    """Exact cos(k*pi/4), read from the period-8 table."""
    return _COS_QUARTER_PI[k % 8]


def sqrt2_power(k: int) -> SurdScalar:
    """Exact (sqrt 2)**k for any integer k."""
    half, odd = divmod(k, 2)
    base = SurdScalar(Fraction(2) ** half)
    return base * SQRT2 if odd else base


# sin(k*pi/6) for k = 0..11; covers every multiple of pi/6, pi/4 needs a second table
_SIN_SIXTH_PI = tuple(
    SurdScalar(*v)
    for v in [
        (0,),
        (Fraction(1, 2),),
        (0, 0, Fraction(1, 2)),
        (1,),
        (0, 0, Fraction(1, 2)),
        (Fraction(1, 2),),
        (0,),
        (Fraction(-1, 2),),
        (0, 0, Fraction(-1, 2)),
        (-1,),
        (0, 0, Fraction(-1, 2)),
        (Fraction(-1, 2),),
    ]
)


def exact_sin_pi(num: int, den: int) -> SurdScalar:
    """Exact sin(num/den * pi) when the value lies in Q(sqrt2, sqrt3).

    Supported whenever the reduced denominator divides 12.  Raises
    ValueError otherwise.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    g = math.gcd(num, den)
    num, den = num // g, den // g
    if 6 % den == 0:
        return _SIN_SIXTH_PI[(num * (6 // den)) % 12]
    if 4 % den == 0:
        # sin(x) = cos(x - pi/2) and the cosine table is in quarter-turns of pi/4
        k = num * (4 // den)
        return cos_quarter_pi(k - 2)
    if 12 % den == 0:
        # k pi/12 = k pi/4 - k pi/6
        k = num * (12 // den)
        s4, c4 = exact_sin_pi(k, 4), exact_sin_pi(k + 2, 4)
        s6, c6 = exact_sin_pi(k, 6), exact_sin_pi(k + 3, 6)
        return s4 * c6 - c4 * s6
    raise ValueError(f"sin({num}*pi/{den}) does not lie in Q(sqrt2, sqrt3)")


def exact_cos_pi_over(m: int) -> SurdScalar:
    """Exact cos(pi/m) for m in {1, 2, 3, 4, 6, 12}."""
    if m == 12:
        return exact_sin_pi(7, 12)
    table = {
        1: SurdScalar(-1),
        2: SurdScalar(0),
        3: SurdScalar(Fraction(1, 2)),
        4: SurdScalar(0, Fraction(1, 2)),
        6: SurdScalar(0, 0, Fraction(1, 2)),
    }
    if m not in table:
        raise ValueError(f"cos(pi/{m}) does not lie in Q(sqrt2, sqrt3)")
    return table[m]


_ENTRY_RE = re.compile(
    r"""^\s*(?P<sign>-)?\s*
    (?:
        (?P<a>\d+)(?:/(?P<b>\d+))?
        (?:\s*\*\s*sqrt\(\s*(?P<c>\d+)(?:/(?P<d>\d+))?\s*\))?
      |
        sqrt\(\s*(?P<c2>\d+)(?:/(?P<d2>\d+))?\s*\)
    )\s*$""",
    re.VERBOSE,
)


def parse_surd(text: str) -> SurdScalar:
    """Parse one matrix entry: ``[-] (a | a/b) [* sqrt(c | c/d)]`` or ``[-] sqrt(c | c/d)``."""
    m = _ENTRY_RE.match(text)
    if m is None:
        raise ValueError(f"malformed surd entry {text!r}")
    sign = -1 if m.group("sign") else 1
    if m.group("a") is not None:
        coeff = Fraction(int(m.group("a")), int(m.group("b") or 1))
        if m.group("c") is not None:
            rad = Fraction(int(m.group("c")), int(m.group("d") or 1))
            return SurdScalar.sqrt_of_rational(rad).scale(sign * coeff)
        return SurdScalar(sign * coeff)
    rad = Fraction(int(m.group("c2")), int(m.group("d2") or 1))
    return SurdScalar.sqrt_of_rational(rad).scale(sign)


def format_surd(x: SurdScalar) -> str:
    """Render an element in a form accepted by :func:`parse_surd` when possible."""
    nonzero = [(c, r) for c, r in zip(x.coefficients, _RADICALS) if c != 0]
    if not nonzero:
        return "0"
    if len(nonzero) > 1:
        return str(x)
    c, r = nonzero[0]
    sign = "-" if c < 0 else ""
    c = abs(c)
    base = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if r == 1:
        return sign + base
    return f"{sign}{base}*sqrt({r})"


def dot_lorentz(u: Iterable[SurdScalar], v: Iterable[SurdScalar]) -> SurdScalar:
    """Lorentzian product with the last coordinate time-like."""
    u = list(u)
    v = list(v)
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    acc = SurdScalar()
    for i, (x, y) in enumerate(zip(u, v)):
        term = x * y
        acc = acc - term if i == len(u) - 1 else acc + term
    return acc
