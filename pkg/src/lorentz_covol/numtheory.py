"""Factorization, Legendre/Kronecker symbols and fundamental discriminants."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EvenD, NonPositive, NotSquareFree


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    """Sieve of Eratosthenes, inclusive."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


@dataclass(frozen=True)
class QFormSpec:
    """The form x_1^2 + ... + x_n^2 - d x_{n+1}^2 with n >= 2 and d odd square-free."""

    n: int
    d: int
    prime_factors_of_d: tuple[int, ...] = field(default=())
    omega_d: int = 0

    @classmethod
    def make(cls, n: int, d: int) -> "QFormSpec":
        if n < 2:
            raise ValueError(f"hyperbolic dimension n must be >= 2, got {n}")
        primes = validate_d(d)
        return cls(n, d, tuple(primes), len(primes))

    @property
    def diagonal(self) -> tuple[int, ...]:
        return (1,) * self.n + (-self.d,)

    @property
    def n_is_odd(self) -> bool:
        return self.n % 2 == 1


def validate_d(d: int) -> list[int]:
    """Return the sorted primes of an odd, square-free, positive d."""
    if d <= 0:
        raise NonPositive(f"d must be positive, got {d}")
    if d % 2 == 0:
        raise EvenD(f"d must be odd, got {d}")
    fac = factorize(d)
    square = [p for p, e in fac.items() if e > 1]
    if square:
        raise NotSquareFree(f"d must be square-free, but {square[0]}^2 divides {d}")
    return sorted(fac)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) by Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise ValueError(f"legendre symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, via quadratic reciprocity."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs an odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_two(D: int) -> int:
    """(D/2): 0 for even D, +1 for D = +-1 mod 8, -1 for D = +-3 mod 8."""
    if D % 2 == 0:
        return 0
    return 1 if D % 8 in (1, 7) else -1


def kronecker(D: int, k: int) -> int:
    """Kronecker symbol (D/k) for k >= 1, completely multiplicative in k."""
    if k < 1:
        raise ValueError(f"kronecker symbol needs k >= 1, got {k}")
    result = 1
    while k % 2 == 0:
        k //= 2
        result *= kronecker_two(D)
        if result == 0:
            return 0
    return result * jacobi(D, k)


@dataclass(frozen=True)
class Discriminant:
    D: int

    def __post_init__(self):
        if self.D == 0 or self.D % 4 not in (0, 1):
            raise ValueError(f"{self.D} is not congruent to 0 or 1 mod 4")

    @property
    def parity_class(self) -> int:
        return self.D % 8

    def character(self, k: int) -> int:
        return kronecker(self.D, k)


def fundamental_discriminant(spec: QFormSpec) -> Discriminant:
    """D = (-1)^((n-1)/2) d, times 4 unless that is 1 mod 4.  Odd n only."""
    if spec.n % 2 == 0:
        raise ValueError("the discriminant D is only attached to odd n")
    signed = (-1) ** ((spec.n - 1) // 2) * spec.d
    return Discriminant(signed if signed % 4 == 1 else 4 * signed)
