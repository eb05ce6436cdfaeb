"""Exact integer, rational and residue-ring arithmetic.

Rationals are :class:`fractions.Fraction` throughout; residues are plain ints
reduced into ``[0, N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import gcd, isqrt, prod

SIEVE_LIMIT = 10**6
MAX_LEVEL = SIEVE_LIMIT


class ArithmeticDomainError(ValueError):
    """Raised when an argument is outside an operation's domain."""


class LevelTooLargeError(ValueError):
    pass


def check_level(N: int) -> int:
    if not isinstance(N, int) or N < 1:
        raise ArithmeticDomainError(f"level must be a positive integer, got {N!r}")
    if N > MAX_LEVEL:
        raise LevelTooLargeError(
            f"level {N} exceeds the supported bound {MAX_LEVEL} (trial-division sieve limit)"
        )
    return N


@lru_cache(maxsize=1)
def _sieve() -> tuple[int, ...]:
    flags = bytearray([1]) * (SIEVE_LIMIT + 1)
    flags[0] = flags[1] = 0
    for i in range(2, isqrt(SIEVE_LIMIT) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, SIEVE_LIMIT + 1, i)))
    return tuple(i for i, f in enumerate(flags) if f)


# most calls only touch small integers; avoid building the full sieve for them
_SMALL: tuple[int, ...] = tuple(
    p for p in range(2, 1000) if all(p % q for q in range(2, isqrt(p) + 1))
)


def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``|n|`` as ``((p, e), ...)`` with increasing primes."""
    n = abs(int(n))
    if n == 0:
        raise ArithmeticDomainError("cannot factor 0")
    return _factorize(n)


@lru_cache(maxsize=65536)
def _factorize(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    primes = _SMALL if n < _SMALL[-1] ** 2 else _sieve()
    for p in primes:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    if n > 1:
        if n > primes[-1] ** 2:
            raise LevelTooLargeError(f"cannot certify the cofactor {n}: beyond the sieve range")
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class PrimePowerDecomposition:
    factors: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, n: int) -> "PrimePowerDecomposition":
        return cls(factorize(n))

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def value(self) -> int:
        return prod(p**e for p, e in self.factors)


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factorize(n))


def is_prime(p: int) -> bool:
    return p >= 2 and factorize(p) == ((p, 1),)


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n):
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def p_adic_valuation(x, p: int) -> int:
    """Return ``k`` with ``x = (a/b) p**k`` and ``gcd(ab, p) = 1``."""
    x = Fraction(x)
    if x == 0:
        raise ArithmeticDomainError("the p-adic valuation of 0 is undefined")
    if p < 2 or not is_prime(p):
        raise ArithmeticDomainError(f"{p} is not a prime")
    k = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        k += 1
    while den % p == 0:
        den //= p
        k -= 1
    return k


def saturated_valuation(c: int, p: int, cap: int) -> int:
    """``min(v_p(c), cap)`` with ``v_p(0)`` read as ``cap``."""
    if c == 0:
        return cap
    # integer fast path; p is a prime divisor of the level in every caller
    c = abs(c)
    k = 0
    while k < cap and c % p == 0:
        c //= p
        k += 1
    return k


def rational_support(x) -> dict[int, int]:
    """Map prime -> nonzero valuation for a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise ArithmeticDomainError("0 has no prime support")
    out = {}
    if abs(x.numerator) > 1:
        out.update(factorize(x.numerator))
    if x.denominator > 1:
        for p, e in factorize(x.denominator):
            out[p] = -e
    return dict(sorted(out.items()))


def inverse_mod(n: int, N: int) -> int:
    if N == 1:
        return 0
    try:
        return pow(n, -1, N)
    except ValueError:
        raise ArithmeticDomainError(f"{n} is not invertible modulo {N}") from None


def r_N(x, N: int) -> int:
    """Reduce an element of G_N (rationals built from primes not dividing N) mod N."""
    x = Fraction(x)
    if x == 0:
        raise ArithmeticDomainError("0 is not in G_N")
    for part in (x.numerator, x.denominator):
        g = gcd(part, N)
        if g > 1:
            bad = prime_divisors(g)[0]
            raise ArithmeticDomainError(f"{x} is not in G_{N}: the prime {bad} divides the level")
    return x.numerator * inverse_mod(x.denominator, N) % N


def crt_split(N: int) -> list[int]:
    return [p**e for p, e in factorize(N)] if N > 1 else []


def crt_combine(residues: list[int], moduli: list[int]) -> int:
    """Solve ``x = r_i mod m_i`` for pairwise coprime moduli."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        t = (r - x) * inverse_mod(M, m) % m
        x += M * t
        M *= m
    return x % M if M > 1 else 0


def multiplicative_order(u: int, N: int) -> int:
    u %= N
    if N == 1:
        return 1
    if gcd(u, N) != 1:
        raise ArithmeticDomainError(f"{u} is not a unit modulo {N}")
    k, x = 1, u
    while x != 1:
        x = x * u % N
        k += 1
    return k


def _prime_power_generators(p: int, e: int) -> list[tuple[int, int]]:
    q = p**e
    if p == 2:
        if e == 1:
            return []
        if e == 2:
            return [(3, 2)]
        return [(q - 1, 2), (5, 2 ** (e - 2))]
    phi = q - q // p
    for g in range(2, q):
        if g % p and multiplicative_order(g, q) == phi:
            return [(g, phi)]
    raise AssertionError(f"no primitive root modulo {q}")


@dataclass(frozen=True)
class ResidueRing:
    """(Z/NZ)^x presented as a direct product of cyclic factors."""

    modulus: int
    unit_group_generators: tuple[tuple[int, int], ...]

    @cached_property
    def order(self) -> int:
        return prod(m for _, m in self.unit_group_generators)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        return tuple(g for g, _ in self.unit_group_generators)

    @cached_property
    def orders(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.unit_group_generators)

    def element(self, exponents) -> int:
        x = 1 % self.modulus
        for (g, _), k in zip(self.unit_group_generators, exponents):
            x = x * pow(g, k, self.modulus) % self.modulus
        return x

    def units(self) -> list[int]:
        return sorted(discrete_log_table(self.modulus))

    def log(self, u: int) -> tuple[int, ...]:
        """Exponent vector of a unit with respect to the generators."""
        table = discrete_log_table(self.modulus)
        try:
            return table[u % self.modulus]
        except KeyError:
            raise ArithmeticDomainError(f"{u} is not a unit modulo {self.modulus}") from None


@lru_cache(maxsize=None)
def unit_group_structure(N: int) -> ResidueRing:
    check_level(N)
    moduli = crt_split(N)
    gens = []
    for i, (p, e) in enumerate(factorize(N) if N > 1 else ()):
        for g, m in _prime_power_generators(p, e):
            residues = [1] * len(moduli)
            residues[i] = g
            gens.append((crt_combine(residues, moduli), m))
    return ResidueRing(N, tuple(gens))


@lru_cache(maxsize=None)
def discrete_log_table(N: int) -> dict[int, tuple[int, ...]]:
    ring = unit_group_structure(N)
    table = {}
    for exps in product(*(range(m) for m in ring.orders)):
        table[ring.element(exps)] = exps
    return table


def units_mod(N: int) -> list[int]:
    return unit_group_structure(N).units()
