"""Subgroups of SL(2, Z/NZ) by explicit enumeration.

Matrices are handled internally as tuples ``(a, b, c, d)`` of residues in
``[0, N)``; :class:`Matrix2Mod` is the validated public wrapper. Subgroups are
built by breadth-first closure and kept as hash sets, which is practical up to
a few hundred thousand elements.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Sequence

from .residue_arith import ArithmeticDomainError, inverse_mod, prime_divisors, units_mod

DEFAULT_MAX_ORDER = 10**8

Quad = tuple[int, int, int, int]


class GroupSizeError(RuntimeError):
    """The ambient group is larger than the configured guard."""


class ModulusMismatchError(ValueError):
    pass


def max_ambient_order() -> int:
    raw = os.environ.get("CUSPMULT_MAX_ORDER")
    return int(raw) if raw else DEFAULT_MAX_ORDER


def sl2_order(N: int) -> int:
    """|SL(2, Z/NZ)| = N^3 prod_{p | N} (1 - p^-2)."""
    order = N**3
    for p in prime_divisors(N) if N > 1 else ():
        order = order // (p * p) * (p * p - 1)
    return order


def check_guard(N: int) -> None:
    limit = max_ambient_order()
    if sl2_order(N) > limit:
        raise GroupSizeError(
            f"|SL(2, Z/{N}Z)| = {sl2_order(N)} exceeds the guard {limit}; "
            "set CUSPMULT_MAX_ORDER to raise it"
        )


@dataclass(frozen=True, order=True)
class Matrix2Mod:
    a: int
    b: int
    c: int
    d: int
    modulus: int = field(compare=True)

    def __post_init__(self):
        N = self.modulus
        if N < 1:
            raise ValueError("modulus must be positive")
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % N)
        if (self.a * self.d - self.b * self.c - 1) % N:
            raise ArithmeticDomainError(
                f"({self.a} {self.b}; {self.c} {self.d}) has determinant "
                f"{(self.a * self.d - self.b * self.c) % N} != 1 mod {N}"
            )

    @classmethod
    def identity(cls, N: int) -> "Matrix2Mod":
        return cls(1, 0, 0, 1, N)

    @classmethod
    def from_quad(cls, q: Quad, N: int) -> "Matrix2Mod":
        return cls(*q, N)

    @property
    def quad(self) -> Quad:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other: "Matrix2Mod") -> "Matrix2Mod":
        if self.modulus != other.modulus:
            raise ModulusMismatchError(f"moduli {self.modulus} and {other.modulus} differ")
        return Matrix2Mod(*mul(self.quad, other.quad, self.modulus), self.modulus)

    def inverse(self) -> "Matrix2Mod":
        return Matrix2Mod(*inv(self.quad, self.modulus), self.modulus)

    def __pow__(self, k: int) -> "Matrix2Mod":
        base = self if k >= 0 else self.inverse()
        out = Matrix2Mod.identity(self.modulus)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        return f"({self.a} {self.b}; {self.c} {self.d}) mod {self.modulus}"


def mul(x: Quad, y: Quad, N: int) -> Quad:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % N, (a * f + b * h) % N, (c * e + d * g) % N, (c * f + d * h) % N)


def inv(x: Quad, N: int) -> Quad:
    a, b, c, d = x
    return (d % N, -b % N, -c % N, a % N)


def commutator(x: Quad, y: Quad, N: int) -> Quad:
    """(x, y) = x y x^-1 y^-1."""
    return mul(mul(x, y, N), mul(inv(x, N), inv(y, N), N), N)


def identity_quad(N: int) -> Quad:
    return (1 % N, 0, 0, 1 % N)


def _as_quad(m, N: int) -> Quad:
    if isinstance(m, Matrix2Mod):
        if m.modulus != N:
            raise ModulusMismatchError(f"matrix {m} does not have modulus {N}")
        return m.quad
    q = tuple(int(v) % N for v in m)
    if (q[0] * q[3] - q[1] * q[2] - 1) % N:
        raise ArithmeticDomainError(f"{q} does not have determinant 1 mod {N}")
    return q


class ElementSet:
    """A subgroup of SL(2, Z/NZ) together with a generating list."""

    __slots__ = ("modulus", "elements", "generators")

    def __init__(self, modulus: int, elements: Iterable[Quad], generators: Sequence[Quad]):
        self.modulus = modulus
        self.elements = frozenset(elements)
        self.generators = tuple(generators)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, m) -> bool:
        q = m.quad if isinstance(m, Matrix2Mod) else tuple(m)
        return q in self.elements

    def __iter__(self) -> Iterator[Quad]:
        return iter(sorted(self.elements))

    def matrices(self) -> list[Matrix2Mod]:
        return [Matrix2Mod(*q, self.modulus) for q in sorted(self.elements)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ElementSet):
            return NotImplemented
        return self.modulus == other.modulus and self.elements == other.elements

    def __hash__(self):
        return hash((self.modulus, self.elements))

    def issubset(self, other: "ElementSet") -> bool:
        return self.modulus == other.modulus and self.elements <= other.elements

    def __repr__(self) -> str:
        return f"ElementSet(modulus={self.modulus}, order={len(self)}, ngens={len(self.generators)})"


def _bfs(known: set, frontier: list, gens: Sequence[Quad], N: int) -> None:
    while frontier:
        nxt = []
        for e, f, g, h in gens:
            for a, b, c, d in frontier:
                y = ((e * a + f * c) % N, (e * b + f * d) % N, (g * a + h * c) % N, (g * b + h * d) % N)
                if y not in known:
                    known.add(y)
                    nxt.append(y)
        nxt.sort()
        frontier = nxt


def _with_inverses(gens: Iterable[Quad], N: int) -> list[Quad]:
    out = set()
    for g in gens:
        out.add(g)
        out.add(inv(g, N))
    out.discard(identity_quad(N))
    return sorted(out)


def generate_closure(generators, modulus: int | None = None) -> ElementSet:
    """Smallest subgroup of SL(2, Z/NZ) containing ``generators``."""
    gens = list(generators)
    if modulus is None:
        if not gens or not isinstance(gens[0], Matrix2Mod):
            raise ValueError("modulus is required when no Matrix2Mod generators are given")
        modulus = gens[0].modulus
    N = modulus
    check_guard(N)
    quads = [_as_quad(g, N) for g in gens]
    ident = identity_quad(N)
    known = {ident}
    _bfs(known, [ident], _with_inverses(quads, N), N)
    return ElementSet(N, known, quads)


def _extend(known: set, gens: list[Quad], new: Quad, N: int) -> None:
    """Grow the subgroup ``known`` (closed under ``gens``) to <known, new> in place."""
    frontier = []
    for x in list(known):
        for y in (mul(new, x, N), mul(inv(new, N), x, N)):
            if y not in known:
                known.add(y)
                frontier.append(y)
    frontier.sort()
    _bfs(known, frontier, _with_inverses(gens + [new], N), N)


def from_elements(elements: Iterable[Quad], N: int) -> ElementSet:
    """Wrap a known subgroup, choosing a generating set greedily in sorted order."""
    elements = frozenset(elements)
    ident = identity_quad(N)
    known = {ident}
    gens: list[Quad] = []
    for x in sorted(elements):
        if x not in known:
            _extend(known, gens, x, N)
            gens.append(x)
    if known != elements:
        raise ArithmeticDomainError("the given elements do not form a subgroup")
    return ElementSet(N, elements, gens)


# ---------------------------------------------------------------- subgroup specs


@dataclass(frozen=True)
class SubgroupSpec:
    """One of Gamma0Image(M), Gamma1Image(M), UpperTriangular, Generated(...), mod N."""

    kind: str
    modulus: int
    level: int = 1
    generators: tuple[Quad, ...] = ()

    KINDS = ("Gamma0Image", "Gamma1Image", "UpperTriangular", "Generated")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown subgroup kind {self.kind!r}")
        if self.kind in ("Gamma0Image", "Gamma1Image") and self.modulus % self.level:
            raise ArithmeticDomainError(f"{self.level} does not divide {self.modulus}")

    @classmethod
    def gamma0(cls, M: int, N: int) -> "SubgroupSpec":
        return cls("Gamma0Image", N, M)

    @classmethod
    def gamma1(cls, M: int, N: int) -> "SubgroupSpec":
        return cls("Gamma1Image", N, M)

    @classmethod
    def upper_triangular(cls, N: int) -> "SubgroupSpec":
        return cls("UpperTriangular", N, N)

    @classmethod
    def generated(cls, gens, N: int) -> "SubgroupSpec":
        return cls("Generated", N, 1, tuple(_as_quad(g, N) for g in gens))


def _solve_b(a: int, c: int, d: int, N: int) -> range | list[int]:
    """All b mod N with a d - b c = 1 mod N."""
    rhs = (a * d - 1) % N
    g = gcd(c, N)
    if rhs % g:
        return []
    step = N // g
    b0 = 0 if step == 1 else (rhs // g) * inverse_mod(c // g, step) % step
    return range(b0, N, step)


def iter_members(spec: SubgroupSpec) -> Iterator[Quad]:
    """Enumerate the elements matching a congruence-type spec directly from its definition."""
    N = spec.modulus
    if spec.kind == "Generated":
        yield from generate_closure(spec.generators, N)
        return
    if spec.kind == "UpperTriangular":
        for a in units_mod(N) if N > 1 else [0]:
            d = inverse_mod(a, N) if N > 1 else 0
            for b in range(N):
                yield (a, b, 0, d)
        return
    M = spec.level
    one_mod_m = spec.kind == "Gamma1Image"
    start = 1 % M if one_mod_m else 0
    step = M if one_mod_m else 1
    for c in range(0, N, M):
        for d in range(start, N, step):
            if gcd(gcd(c, d), N) != 1:
                continue
            for a in range(start, N, step):
                for b in _solve_b(a, c, d, N):
                    yield (a, b, c, d)


def subgroup(spec: SubgroupSpec) -> ElementSet:
    check_guard(spec.modulus)
    if spec.kind == "Generated":
        return generate_closure(spec.generators, spec.modulus)
    return from_elements(iter_members(spec), spec.modulus)


def standard_generators(N: int) -> list[Quad]:
    """(1 1; 0 1) and (1 0; 1 1), which generate SL(2, Z/NZ)."""
    return [(1 % N, 1 % N, 0, 1 % N), (1 % N, 0, 1 % N, 1 % N)]


def borel_generators(N: int) -> list[Quad]:
    """Generators of the upper-triangular subgroup B."""
    gens = [(1 % N, 1 % N, 0, 1 % N)]
    for u in units_mod(N) if N > 1 else []:
        if u != 1:
            gens.append((u, 0, 0, inverse_mod(u, N)))
    return gens


def lower_unipotent(M: int, N: int) -> Quad:
    return (1 % N, 0, M % N, 1 % N)


# ---------------------------------------------------------------- operations


def commutator_subgroup(H: ElementSet) -> ElementSet:
    """Derived subgroup of H: normal closure in H of the generator commutators."""
    N = H.modulus
    hgens = _with_inverses(H.generators, N)
    ident = identity_quad(N)
    seeds = sorted(
        {commutator(x, y, N) for i, x in enumerate(H.generators) for y in H.generators[i + 1 :]}
        - {ident}
    )
    known = {ident}
    gens: list[Quad] = []
    for s in seeds:
        if s not in known:
            _extend(known, gens, s, N)
            gens.append(s)
    i = 0
    while i < len(gens):
        x = gens[i]
        for h in hgens:
            y = mul(mul(h, x, N), inv(h, N), N)
            if y not in known:
                _extend(known, gens, y, N)
                gens.append(y)
        i += 1
    return ElementSet(N, known, gens)


def double_cosets(H: ElementSet, G: ElementSet) -> list[frozenset[Quad]]:
    """Partition G into the double cosets H g H, ordered by least element."""
    if H.modulus != G.modulus:
        raise ModulusMismatchError("H and G have different moduli")
    if not H.elements <= G.elements:
        raise ArithmeticDomainError("H is not contained in G")
    N = G.modulus
    remaining = set(G.elements)
    hs = sorted(H.elements)
    out = []
    while remaining:
        g = min(remaining)
        left = {mul(h, g, N) for h in hs}
        coset = frozenset(mul(x, h, N) for x in left for h in hs)
        out.append(coset)
        remaining -= coset
    return out


def commutator_lower_left_formula(A: Quad, B: Quad, M: int, N: int) -> int:
    """Lower-left entry of (A, B) for A = (a b; Mc d), B = (e f; Mg h), mod N."""
    a, b, Mc, d = A
    e, f, Mg, h = B
    if Mc % M or Mg % M:
        raise ArithmeticDomainError(f"lower-left entries must be divisible by {M}")
    c, g = Mc // M, Mg // M
    value = d * h * M * (c * (e - h) - g * (a - d)) + (
        b * c * e * g - a * c * f * g + b * d * g * g - c * c * f * h
    ) * M * M
    return value % N


def commutator_identity_check(A, B, M: int) -> bool:
    if isinstance(A, Matrix2Mod):
        N = A.modulus
        A, B = A.quad, _as_quad(B, N)
    else:
        raise TypeError("pass Matrix2Mod instances")
    return commutator(A, B, N)[2] == commutator_lower_left_formula(A, B, M, N)


def bottom_row_image(S: ElementSet, m: int) -> set[tuple[int, int]]:
    if S.modulus % m:
        raise ArithmeticDomainError(f"{m} does not divide {S.modulus}")
    return {(c % m, d % m) for _, _, c, d in S.elements}


def contains_subgroup(S: ElementSet, spec: SubgroupSpec) -> bool:
    if spec.modulus != S.modulus:
        raise ModulusMismatchError("spec and set have different moduli")
    return all(x in S.elements for x in iter_members(spec))


def join(*sets: ElementSet) -> ElementSet:
    """Subgroup generated by several subgroups of the same modulus."""
    N = sets[0].modulus
    gens = [g for s in sets for g in s.generators]
    return generate_closure(gens, N)
