"""Dirichlet characters mod N with values stored as rational angles.

A character is determined by one exponent per generator of the unit group
returned by :func:`unit_group_structure`: the generator ``g_i`` of order
``m_i`` is sent to ``e(k_i / m_i)``. The CLI label ``"8:[1,0]"`` spells out
``N`` and the exponent vector ``(k_1, ..., k_r)``. This labeling is a local
convention tied to the generator choice, not a standard one.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd, lcm

from .polar import PolarValue, wrap_angle
from .residue_arith import ArithmeticDomainError, unit_group_structure

_LABEL = re.compile(r"^\s*(\d+)\s*:\s*(\[.*\])\s*$")


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        ring = unit_group_structure(self.modulus)
        if len(self.exponents) != len(ring.orders):
            raise ValueError(
                f"modulus {self.modulus} needs {len(ring.orders)} exponents, got {len(self.exponents)}"
            )
        reduced = tuple(int(k) % m for k, m in zip(self.exponents, ring.orders))
        object.__setattr__(self, "exponents", reduced)

    @classmethod
    def trivial(cls, N: int) -> "DirichletCharacter":
        return _trivial(N)

    @classmethod
    def parse(cls, label: str) -> "DirichletCharacter":
        m = _LABEL.match(label)
        if not m:
            raise ValueError(f"bad character label {label!r}; expected e.g. '8:[1,0]'")
        exps = json.loads(m.group(2))
        if not all(isinstance(k, int) for k in exps):
            raise ValueError(f"bad exponent vector in {label!r}")
        return cls(int(m.group(1)), tuple(exps))

    @property
    def label(self) -> str:
        return f"{self.modulus}:[{','.join(map(str, self.exponents))}]"

    @property
    def angles(self) -> tuple[Fraction, ...]:
        orders = unit_group_structure(self.modulus).orders
        return tuple(Fraction(k, m) for k, m in zip(self.exponents, orders))

    def angle_of(self, n: int) -> Fraction | None:
        """Angle of chi(n), or ``None`` when gcd(n, N) > 1."""
        N = self.modulus
        if gcd(n, N) != 1:
            return None
        if not any(self.exponents):
            return Fraction(0)
        logs = unit_group_structure(N).log(n % N)
        return wrap_angle(sum(e * t for e, t in zip(logs, self.angles)))

    def __call__(self, n: int) -> PolarValue:
        return evaluate(self, n)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if self.modulus != other.modulus:
            raise ValueError("characters of different moduli")
        return DirichletCharacter(
            self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents))
        )

    def is_trivial(self) -> bool:
        return not any(self.exponents)


@lru_cache(maxsize=256)
def _trivial(N: int) -> DirichletCharacter:
    return DirichletCharacter(N, (0,) * len(unit_group_structure(N).orders))


def evaluate(chi: DirichletCharacter, n: int) -> PolarValue:
    t = chi.angle_of(n)
    return PolarValue.zero() if t is None else PolarValue.unit(t)


def lift_gamma0(chi: DirichletCharacter, g) -> PolarValue:
    """chi~(g) = chi(d) for g = (a b; c d) in the image of Gamma_0(N)."""
    N = chi.modulus
    a, b, c, d = _entries(g)
    if c % N:
        raise ArithmeticDomainError(f"lower-left entry {c} is not divisible by {N}")
    return evaluate(chi, d)


def _entries(g):
    if isinstance(g, tuple):
        return g
    return g.a, g.b, g.c, g.d


def enumerate_characters(N: int) -> list[DirichletCharacter]:
    orders = unit_group_structure(N).orders
    return [DirichletCharacter(N, exps) for exps in product(*(range(m) for m in orders))]


def character_order(chi: DirichletCharacter) -> int:
    return reduce(lcm, (t.denominator for t in chi.angles), 1)
