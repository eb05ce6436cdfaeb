"""Cusps of Gamma_0(N): representatives, widths and cusp parameters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod

from .dirichlet import DirichletCharacter
from .residue_arith import (
    ArithmeticDomainError,
    check_level,
    divisors,
    euler_phi,
    factorize,
    saturated_valuation,
)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a x + b y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class Cusp:
    """The cusp a/b with gcd(a, b) = 1, b >= 0; infinity is 1/0."""

    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if a == 0 and b == 0:
            raise ValueError("0/0 is not a cusp")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def infinity(cls) -> "Cusp":
        return cls(1, 0)

    @classmethod
    def parse(cls, text: str) -> "Cusp":
        text = text.strip()
        if text in ("oo", "inf", "infinity"):
            return cls.infinity()
        if "/" in text:
            a, b = text.split("/")
            return cls(int(a), int(b))
        return cls(int(text), 1)

    def __str__(self) -> str:
        if self.b == 0:
            return "oo"
        if self.b == 1:
            return str(self.a)
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class GammaMatrix:
    """An element (a b; c d) of SL(2, Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ArithmeticDomainError(
                f"det({self.a} {self.b}; {self.c} {self.d}) = {self.a * self.d - self.b * self.c} != 1"
            )

    @classmethod
    def identity(cls) -> "GammaMatrix":
        return cls(1, 0, 0, 1)

    def __mul__(self, o: "GammaMatrix") -> "GammaMatrix":
        return GammaMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "GammaMatrix":
        return GammaMatrix(self.d, -self.b, -self.c, self.a)

    def cusp(self) -> Cusp:
        return Cusp(self.a, self.c)

    def quad(self, N: int) -> tuple[int, int, int, int]:
        return (self.a % N, self.b % N, self.c % N, self.d % N)

    def __str__(self) -> str:
        return f"({self.a} {self.b}; {self.c} {self.d})"


@dataclass(frozen=True)
class CuspData:
    cusp: Cusp
    width: int
    M: int
    n3: int
    mu: Fraction


def scaling_matrix(cusp: Cusp) -> GammaMatrix:
    """gamma in SL(2, Z) with first column (a, b): minimal |d|, ties broken by d > 0."""
    a, b = cusp.a, cusp.b
    if b == 0:
        return GammaMatrix.identity()
    # a*d - x*b = 1: d is determined mod b
    _, u, _ = _xgcd(a, b)
    d = u % b
    if d > b - d:
        d -= b
    x = (a * d - 1) // b
    return GammaMatrix(a, x, b, d)


def lift_bottom_row(c: int, d: int, N: int) -> GammaMatrix:
    """Some gamma in SL(2, Z) whose bottom row reduces to (c, d) mod N."""
    c, d = c % N, d % N
    if gcd(gcd(c, d), N) != 1:
        raise ArithmeticDomainError(f"({c}, {d}) does not generate Z/{N}Z")
    c0 = c if c else N
    k = 0
    while gcd(c0, d + k * N) != 1:
        k += 1
    d0 = d + k * N
    _, u, v = _xgcd(c0, d0)
    # u c0 + v d0 = 1  ->  a = v, b = -u
    return GammaMatrix(v, -u, c0, d0)


def _per_prime(N: int):
    return factorize(N) if N > 1 else ()


def width(N: int, gamma: GammaMatrix) -> int:
    """Cusp width m = prod_q q^max(0, v_q(N) - 2 v_q(c))."""
    out = 1
    for q, e in _per_prime(N):
        vc = saturated_valuation(gamma.c, q, e)
        out *= q ** max(0, e - 2 * vc)
    return out


def n3(N: int, gamma: GammaMatrix) -> int:
    out = 1
    for q, e in _per_prime(N):
        vc = saturated_valuation(gamma.c, q, e)
        out *= q ** min(vc, e - vc)
    return out


def cusp_parameter(N: int, chi: DirichletCharacter, gamma: GammaMatrix) -> Fraction:
    """mu in [0, 1) with e(mu) = chi(1 + a c m), m the width."""
    if chi.modulus != N:
        raise ValueError(f"character modulus {chi.modulus} != level {N}")
    m = width(N, gamma)
    t = chi.angle_of(1 + gamma.a * gamma.c * m)
    if t is None:
        raise AssertionError(f"1 + a c m is not a unit mod {N} for {gamma}")
    return t


def cusp_data(N: int, cusp: Cusp, chi: DirichletCharacter | None = None,
              gamma: GammaMatrix | None = None) -> CuspData:
    chi = chi or DirichletCharacter.trivial(N)
    gamma = gamma or scaling_matrix(cusp)
    return CuspData(
        cusp=cusp,
        width=width(N, gamma),
        M=gcd(N, cusp.b),
        n3=n3(N, gamma),
        mu=cusp_parameter(N, chi, gamma),
    )


def cusp_invariant(N: int, cusp: Cusp) -> tuple[int, int]:
    """Complete Gamma_0(N)-invariant (d, a * (b/d) mod gcd(d, N/d)) with d = gcd(b, N)."""
    d = gcd(cusp.b, N)
    g = gcd(d, N // d)
    return d, cusp.a * (cusp.b // d) % g


def cusps_equivalent(N: int, c1: Cusp, c2: Cusp) -> bool:
    return cusp_invariant(N, c1) == cusp_invariant(N, c2)


def cusp_count(N: int) -> int:
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def cusp_representatives(N: int, chi: DirichletCharacter | None = None) -> list[CuspData]:
    """One cusp per Gamma_0(N)-class: infinity first, then a/d for divisors d < N."""
    check_level(N)
    reps = [Cusp.infinity()]
    for d in divisors(N):
        if d == N:
            continue
        g = gcd(d, N // d)
        if d == 1:
            reps.append(Cusp(0, 1))
            continue
        for u in range(g):
            if gcd(u, g) != 1 and g > 1:
                continue
            a = u if u else g
            while gcd(a, d) != 1:
                a += g
            reps.append(Cusp(a, d))
    return [cusp_data(N, c, chi) for c in reps]


def sl2z_index(N: int) -> int:
    """[SL(2, Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)."""
    return prod(p ** (e - 1) * (p + 1) for p, e in _per_prime(N))
