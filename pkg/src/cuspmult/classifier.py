"""Decision procedure for multiplicativity of the coefficients B_f(gamma, .).

Given a level N, a character and gamma in SL(2, Z), compute the arithmetic
invariants (N1, M, M1, N3, width, mu) and sort gamma into one of three
outcomes: multiplicativity is guaranteed (N | 2cd), a necessary condition
fails, or neither can be decided from (N, chi, gamma) alone.

The form f never enters: hypotheses about how often its coefficients vanish
are modelled by the unit subgroup G passed in (``FullUnits`` for the
"nonzero more than half the time" situation, ``Squares`` for the
unconditional one).
"""

from __future__ import annotations

import enum
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cusp_geometry import GammaMatrix, cusp_parameter, lift_bottom_row, n3, width
from .dirichlet import DirichletCharacter
from .residue_arith import (
    ArithmeticDomainError,
    check_level,
    factorize,
    inverse_mod,
    r_N,
    saturated_valuation,
    unit_group_structure,
    units_mod,
)
from .sl2_finite import (
    ElementSet,
    SubgroupSpec,
    borel_generators,
    generate_closure,
    iter_members,
    mul,
)


class Status(str, enum.Enum):
    SUFFICIENT = "SufficientHolds"
    VIOLATED = "NecessaryViolated"
    INDETERMINATE = "Indeterminate"


class Assumption(str, enum.Enum):
    FULL_UNITS = "FullUnits"
    SQUARES = "Squares"
    CUSTOM = "Custom"


class NotGamma0Error(RuntimeError):
    def __init__(self, order: int, message: str):
        super().__init__(message)
        self.order = order


@dataclass(frozen=True)
class XPoint:
    """(c, d) mod N generating Z/NZ."""

    c: int
    d: int
    modulus: int

    def __post_init__(self):
        N = self.modulus
        object.__setattr__(self, "c", self.c % N)
        object.__setattr__(self, "d", self.d % N)
        if gcd(gcd(self.c, self.d), N) != 1:
            raise ArithmeticDomainError(f"({self.c}, {self.d}) does not generate Z/{N}Z")

    @classmethod
    def of(cls, gamma: GammaMatrix, N: int) -> "XPoint":
        return cls(gamma.c, gamma.d, N)

    def projective_key(self) -> tuple[int, int]:
        """Canonical representative of [c : d] in P^1(Z/NZ)."""
        return _projective_keys(self.modulus)[(self.c, self.d)]


@lru_cache(maxsize=32)
def _projective_keys(N: int) -> dict[tuple[int, int], tuple[int, int]]:
    units = units_mod(N) if N > 1 else [0]
    keys: dict[tuple[int, int], tuple[int, int]] = {}
    for c in range(N):
        for d in range(N):
            if (c, d) in keys or gcd(gcd(c, d), N) != 1:
                continue
            cls = {(u * c % N, u * d % N) for u in units}
            k = min(cls)
            for p in cls:
                keys[p] = k
    return keys


def xpoints(N: int) -> list[XPoint]:
    return [XPoint(c, d, N) for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1]


@dataclass(frozen=True)
class SubgroupOfUnits:
    modulus: int
    generators: tuple[int, ...]

    def __post_init__(self):
        N = self.modulus
        gens = tuple(sorted({g % N for g in self.generators}))
        for g in gens:
            if gcd(g, N) != 1:
                raise ArithmeticDomainError(f"{g} is not a unit modulo {N}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def full(cls, N: int) -> "SubgroupOfUnits":
        return cls(N, unit_group_structure(N).generators if N > 1 else ())

    @classmethod
    def squares(cls, N: int) -> "SubgroupOfUnits":
        gens = unit_group_structure(N).generators if N > 1 else ()
        return cls(N, tuple(g * g % N for g in gens))

    @classmethod
    def trivial(cls, N: int) -> "SubgroupOfUnits":
        return cls(N, ())

    def elements(self) -> list[int]:
        return list(_unit_closure(self.modulus, self.generators))


@lru_cache(maxsize=1024)
def _unit_closure(N: int, generators: tuple[int, ...]) -> tuple[int, ...]:
    seen = {1 % N}
    frontier = [1 % N]
    while frontier:
        nxt = []
        for x in frontier:
            for g in generators:
                y = x * g % N
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


# ---------------------------------------------------------------- invariants


def _per_prime(N: int):
    return factorize(N) if N > 1 else ()


def bad_primes(N: int, gamma: GammaMatrix) -> list[int]:
    """Primes q | N meeting none of v_q(c) = v_q(N), v_q(d) = v_q(N), (q = 2, v_2(c) = v_2(N) - 1).

    The remaining conditions (the archimedean place, primes not dividing N)
    never concern a prime divisor of N.
    """
    out = []
    for q, e in _per_prime(N):
        vc = saturated_valuation(gamma.c, q, e)
        vd = saturated_valuation(gamma.d, q, e)
        if vc == e or vd == e or (q == 2 and vc == e - 1):
            continue
        out.append(q)
    return out


def compute_N1(N: int, gamma: GammaMatrix) -> int:
    out = 1
    for q in bad_primes(N, gamma):
        e = dict(_per_prime(N))[q]
        out *= q ** (e - saturated_valuation(gamma.c, q, e))
    return out


def compute_M(N: int, gamma: GammaMatrix) -> int:
    return gcd(N, 2 * gamma.c * gamma.d)


def m1_exponent(q: int, v: int) -> int:
    if v == 0 or q > 3:
        return v
    if q == 3:
        return v + 1
    return 3 if v == 1 else v + 3


def compute_M1(M: int) -> int:
    out = 1
    for q, v in _per_prime(M):
        out *= q ** m1_exponent(q, v)
    return out


def sharp_bound(q: int, vM: int) -> int:
    """Largest permitted v_q(N / M) given v_q(M)."""
    if vM == 0 or q > 3:
        return 0
    if q == 3:
        return 1
    return 2 if vM == 1 else 3


def group_divisor(N: int, gamma: GammaMatrix, G: SubgroupOfUnits) -> int:
    """Greatest divisor of N dividing (m - 1) c d for every m in G."""
    out = N
    cd = gamma.c * gamma.d
    for m in G.elements():
        out = gcd(out, (m - 1) * cd)
    return out


def gn_act(beta, x: XPoint) -> XPoint:
    """beta . (c, d) = (r_N(1/beta) c, d)."""
    N = x.modulus
    return XPoint(r_N(1 / Fraction(beta), N) * x.c, x.d, N)


@dataclass(frozen=True)
class Orbit:
    modulus: int
    pairs: tuple[tuple[int, int], ...]
    projective_size: int

    @property
    def points(self) -> tuple[XPoint, ...]:
        return tuple(XPoint(c, d, self.modulus) for c, d in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def orbit(x: XPoint, G: SubgroupOfUnits) -> Orbit:
    N = x.modulus
    pairs = tuple(sorted({(g * x.c % N, x.d) for g in G.elements()}))
    keys = _projective_keys(N)
    return Orbit(N, pairs, len({keys[p] for p in pairs}))


# ---------------------------------------------------------------- verdict


@dataclass(frozen=True)
class Evidence:
    tag: str
    fact: str
    holds: bool

    def to_json(self) -> dict:
        return {"tag": self.tag, "fact": self.fact, "holds": self.holds}


@dataclass(frozen=True)
class Invariants:
    N1: int
    M: int
    M1: int
    N3: int
    width: int
    mu: Fraction

    def to_json(self) -> dict:
        return {
            "N1": self.N1,
            "M": self.M,
            "M1": self.M1,
            "N3": self.N3,
            "width": self.width,
            "mu": str(self.mu),
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    level: int
    gamma: GammaMatrix
    character: str
    assumption: Assumption
    group: tuple[int, ...]
    invariants: Invariants
    orbit_size: int
    orbit_projective_size: int
    evidence: tuple[Evidence, ...] = field(default_factory=tuple)

    def failed(self) -> list[Evidence]:
        return [e for e in self.evidence if not e.holds]

    def to_json(self) -> dict:
        g = self.gamma
        return {
            "status": self.status.value,
            "level": self.level,
            "gamma": [g.a, g.b, g.c, g.d],
            "character": self.character,
            "assumption": self.assumption.value,
            "group_generators": list(self.group),
            "invariants": self.invariants.to_json(),
            "orbit_size": self.orbit_size,
            "orbit_projective_size": self.orbit_projective_size,
            "evidence": [e.to_json() for e in self.evidence],
        }


def default_group(N: int, assumption: Assumption) -> SubgroupOfUnits:
    if assumption is Assumption.FULL_UNITS:
        return SubgroupOfUnits.full(N)
    if assumption is Assumption.SQUARES:
        return SubgroupOfUnits.squares(N)
    raise ValueError("a Custom assumption needs an explicit group")


def _divides(a: int, b: int) -> bool:
    return b % a == 0


def classify(
    N: int,
    chi: DirichletCharacter | None,
    gamma: GammaMatrix,
    G: SubgroupOfUnits | None = None,
    assumption: Assumption = Assumption.FULL_UNITS,
) -> Verdict:
    check_level(N)
    chi = chi or DirichletCharacter.trivial(N)
    if chi.modulus != N:
        raise ValueError(f"character modulus {chi.modulus} != level {N}")
    assumption = Assumption(assumption)
    if G is None:
        G = default_group(N, assumption)
    elif G.modulus != N:
        raise ArithmeticDomainError(f"group modulus {G.modulus} != level {N}")

    c, d = gamma.c, gamma.d
    MG = group_divisor(N, gamma, G)
    M1 = compute_M1(MG)
    inv = Invariants(
        N1=compute_N1(N, gamma),
        M=MG,
        M1=M1,
        N3=n3(N, gamma),
        width=width(N, gamma),
        mu=cusp_parameter(N, chi, gamma),
    )
    orb = orbit(XPoint.of(gamma, N), G)
    evidence: list[Evidence] = []

    suff = _divides(N, 2 * c * d)
    evidence.append(Evidence("sufficient:N|2cd", f"{N} | 2cd = {2 * c * d}", suff))

    necessary = _divides(N, M1)
    evidence.append(Evidence("necessary:N|M1", f"{N} | M1 = {M1} (M = {MG})", necessary))
    for q, e in _per_prime(N):
        vM = saturated_valuation(MG, q, e)
        bound = sharp_bound(q, vM)
        ok = e - vM <= bound
        evidence.append(
            Evidence(
                f"local-bound:q={q}",
                f"v_{q}(N/M) = {e - vM} <= {bound} (v_{q}(M) = {vM})",
                ok,
            )
        )

    if assumption is Assumption.FULL_UNITS:
        evidence.append(
            Evidence("coarse:(N/M)|24", f"N/M = {N // MG} divides 24", _divides(N // MG, 24))
        )
        evidence.append(Evidence("coarse:N|48cd", f"{N} | 48cd = {48 * c * d}", _divides(N, 48 * c * d)))
    if assumption is Assumption.SQUARES:
        bound576 = _divides(N, 576 * c * d)
        evidence.append(Evidence("coarse:N|576cd", f"{N} | 576cd = {576 * c * d}", bound576))
        if bound576 != necessary:
            evidence.append(
                Evidence(
                    "note:576cd-vs-M1",
                    f"the M1 test ({necessary}) and the 576cd test ({bound576}) disagree",
                    True,
                )
            )

    if inv.mu != 0 and len(orb) > 1:
        evidence.append(
            Evidence(
                "cusp-parameter-obstruction",
                f"mu = {inv.mu} != 0 while the G-orbit of x_N(gamma) has {len(orb)} elements",
                False,
            )
        )

    if suff:
        status = Status.SUFFICIENT
    elif not necessary:
        status = Status.VIOLATED
    else:
        status = Status.INDETERMINATE

    return Verdict(
        status=status,
        level=N,
        gamma=gamma,
        character=chi.label,
        assumption=assumption,
        group=G.generators,
        invariants=inv,
        orbit_size=len(orb),
        orbit_projective_size=orb.projective_size,
        evidence=tuple(evidence),
    )


# ---------------------------------------------------------------- closure check


def _gamma0_order(M: int, N: int, _cache={}) -> int:
    key = (M, N)
    if key not in _cache:
        _cache[key] = sum(1 for _ in iter_members(SubgroupSpec.gamma0(M, N)))
    return _cache[key]


def generation_subgroup(N: int, gamma: GammaMatrix, G: SubgroupOfUnits) -> ElementSet:
    """<Gamma_0(N) image, (a  b/m; cm  d) gamma^-1 for m in G> inside SL(2, Z/NZ)."""
    a, b, c, d = gamma.quad(N)
    ginv = gamma.inverse().quad(N)
    gens = borel_generators(N)  # Gamma_0(N) mod N is the upper-triangular group
    for m in G.elements():
        mbar = inverse_mod(m, N) if N > 1 else 0
        gens.append(mul((a, b * mbar % N, c * m % N, d), ginv, N))
    return generate_closure(gens, N)


def gamma0_generation_check(N: int, gamma: GammaMatrix, G: SubgroupOfUnits | None = None) -> int:
    """The M' with <Gamma_0(N), ...> = Gamma_0(M') mod N, computed by closure."""
    G = G or SubgroupOfUnits.full(N)
    S = generation_subgroup(N, gamma, G)
    M = N
    for _, _, c, _ in S.elements:
        M = gcd(M, c)
    if len(S) != _gamma0_order(M, N):
        raise NotGamma0Error(
            len(S),
            f"closure has {len(S)} elements, not the image of Gamma_0(M') for any M' | {N}",
        )
    return M


def lift_xpoint(x: XPoint) -> GammaMatrix:
    return lift_bottom_row(x.c, x.d, x.modulus)
