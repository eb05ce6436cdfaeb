"""Finite-sample tests of multiplicativity for functions Q^x -> C.

A :class:`SampledFunction` records exact values at finitely many nonzero
rationals. Every criterion here quantifies only over the sampled points, so a
``True`` answer means "no violation on the sampled domain".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Mapping

from .dirichlet import DirichletCharacter, enumerate_characters, evaluate
from .polar import PolarValue
from .residue_arith import ArithmeticDomainError, r_N, rational_support

__all__ = [
    "PolarValue",
    "SampledFunction",
    "SupportSet",
    "SatakeLocal",
    "Quadruple",
    "CriterionResult",
    "Factorization",
    "coprime_condition",
    "sign_condition",
    "admissible",
    "is_multiplicative",
    "factorize",
    "weak_criterion",
    "subgroup_condition",
    "find_character",
    "satake_value",
    "vanishing_modulus",
    "parse_sampled_function",
    "parse_support_set",
    "SampleFormatError",
    "VanishingPatternError",
]


class SampleFormatError(ValueError):
    pass


class VanishingPatternError(ValueError):
    """Zeros of a Satake sequence that do not form a progression k = -1 mod m."""


@dataclass(frozen=True)
class SampledFunction:
    values: Mapping[Fraction, PolarValue]
    modulus: int | None = None

    def __post_init__(self):
        vals = {}
        for x, v in self.values.items():
            x = Fraction(x)
            if x == 0:
                raise ArithmeticDomainError("sample points must be nonzero")
            vals[x] = v if isinstance(v, PolarValue) else PolarValue.from_rational(v)
        object.__setattr__(self, "values", dict(sorted(vals.items())))

    def __getitem__(self, x) -> PolarValue:
        return self.values[Fraction(x)]

    def get(self, x) -> PolarValue | None:
        return self.values.get(Fraction(x))

    def __contains__(self, x) -> bool:
        return Fraction(x) in self.values

    def __len__(self) -> int:
        return len(self.values)

    @property
    def support(self) -> list[Fraction]:
        return list(self.values)

    def times(self, other: "SampledFunction") -> "SampledFunction":
        common = [x for x in self.values if x in other.values]
        return SampledFunction({x: self.values[x] * other.values[x] for x in common}, self.modulus)


@dataclass(frozen=True)
class SupportSet:
    elements: frozenset[Fraction]
    modulus: int
    image: frozenset[int] = field(init=False)

    def __post_init__(self):
        els = frozenset(Fraction(s) for s in self.elements)
        object.__setattr__(self, "elements", els)
        img = set()
        for s in els:
            try:
                img.add(r_N(s, self.modulus))
            except ArithmeticDomainError:
                pass
        object.__setattr__(self, "image", frozenset(img))


@dataclass(frozen=True)
class SatakeLocal:
    """Local data at p through trace t = alpha + beta and norm n = alpha * beta."""

    p: int
    trace: Fraction
    norm: Fraction

    @classmethod
    def from_roots(cls, p: int, alpha, beta) -> "SatakeLocal":
        alpha, beta = Fraction(alpha), Fraction(beta)
        return cls(p, alpha + beta, alpha * beta)


Quadruple = tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class CriterionResult:
    holds: bool
    witness: Quadruple | None = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.holds


# ---------------------------------------------------------------- helpers


def _sign(x: Fraction) -> int:
    return -1 if x < 0 else 1


def _part(x: Fraction, primes: Iterable[int], support: Mapping[int, int]) -> Fraction:
    """The |x|-component supported on ``primes``."""
    out = Fraction(1)
    for p in primes:
        e = support.get(p, 0)
        if e:
            out *= Fraction(p) ** e
    return out


def coprime_condition(a1, a2, b1, b2) -> bool:
    """For every p: v_p(a1) != 0 or v_p(a2) != 0 implies v_p(b1) = v_p(b2) = 0."""
    alpha_primes = set(rational_support(a1)) | set(rational_support(a2))
    beta_primes = set(rational_support(b1)) | set(rational_support(b2))
    return not (alpha_primes & beta_primes)


def sign_condition(a1, a2, b1, b2) -> bool:
    """The same restriction at the real place: a negative alpha forces both betas positive.

    Without it the quadruple relation would force h(-1)^2 = h(1)^2, which a
    factorization with an arbitrary h_inf does not satisfy.
    """
    return not ((a1 < 0 or a2 < 0) and (b1 < 0 or b2 < 0))


def admissible(a1, a2, b1, b2) -> bool:
    return coprime_condition(a1, a2, b1, b2) and sign_condition(a1, a2, b1, b2)


def _relation_holds(h: Mapping[Fraction, PolarValue], q: Quadruple) -> bool | None:
    a1, a2, b1, b2 = q
    try:
        return h[a1 * b1] * h[a2 * b2] == h[a1 * b2] * h[a2 * b1]
    except KeyError:
        return None


def _equivalent_forms(q: Quadruple) -> list[Quadruple]:
    """Quadruples expressing the same relation (swap the alphas, the betas, or the two roles)."""
    a1, a2, b1, b2 = q
    forms = []
    for x1, x2, y1, y2 in ((a1, a2, b1, b2), (b1, b2, a1, a2)):
        forms += [(x1, x2, y1, y2), (x2, x1, y2, y1), (x1, x2, y2, y1), (x2, x1, y1, y2)]
    return forms


def _canonical_witness(q: Quadruple) -> Quadruple:
    return min(_equivalent_forms(q))


# ---------------------------------------------------------------- criteria


def _quadruples_for_pair(x: Fraction, y: Fraction, sx: dict, sy: dict):
    """Nontrivial admissible (a1, a2, b1, b2) with a1 b1 = x, a2 b2 = y.

    Admissibility sends each prime, and the sign, wholly to the alphas or to
    the betas, so a quadruple is a subset of places. A subset and its
    complement give the same relation, so the first place is kept on the
    beta side.
    """
    places = sorted(set(sx) | set(sy))
    if x < 0 or y < 0:
        places.append(-1)
    for r in range(1, len(places)):
        for chosen in combinations(places[1:], r):
            a1, a2 = _part(x, chosen, sx), _part(y, chosen, sy)
            if -1 in chosen:
                a1, a2 = _sign(x) * a1, _sign(y) * a2
            q = (a1, a2, x / a1, y / a2)
            if a1 != a2 and q[2] != q[3]:
                yield q


def is_multiplicative(h: SampledFunction) -> CriterionResult:
    """Quadruple criterion on every sampled quadruple; the minimal violation is the witness."""
    vals = h.values
    pts = sorted(vals)
    supports = {x: rational_support(x) for x in pts}
    witness = None
    checked = 0
    for i, x in enumerate(pts):
        for y in pts[i + 1:]:
            for q in _quadruples_for_pair(x, y, supports[x], supports[y]):
                ok = _relation_holds(vals, q)
                if ok is None:
                    continue
                checked += 1
                if not ok:
                    q = _canonical_witness(q)
                    if witness is None or q < witness:
                        witness = q
    return CriterionResult(witness is None, witness, checked)


def weak_criterion(h: SampledFunction, S: SupportSet | Iterable) -> CriterionResult:
    """The quadruple relation for all a1, a2, b1, b2 drawn from S (admissible quadruples only)."""
    elements = S.elements if isinstance(S, SupportSet) else frozenset(Fraction(s) for s in S)
    pts = sorted(elements)
    supp = {s: set(rational_support(s)) | ({-1} if s < 0 else set()) for s in pts}
    vals = h.values
    witness = None
    checked = 0
    for a1, a2 in product(pts, repeat=2):
        alpha_places = supp[a1] | supp[a2]
        betas = [b for b in pts if not (supp[b] & alpha_places)]
        for b1, b2 in product(betas, repeat=2):
            q = (a1, a2, b1, b2)
            ok = _relation_holds(vals, q)
            if ok is None:
                continue
            checked += 1
            if not ok and (witness is None or q < witness):
                witness = q
    return CriterionResult(witness is None, witness, checked)


@dataclass(frozen=True)
class Factorization:
    """h_inf on {+1, -1} and h_p(k) for sampled (p, k); missing entries are unsampled."""

    alpha0: Fraction
    h_inf: dict[int, PolarValue]
    local: dict[int, dict[int, PolarValue]]

    def value(self, x) -> PolarValue | None:
        """Reconstruct h(x), or ``None`` if a needed factor was not sampled."""
        x = Fraction(x)
        sign = _sign(x)
        if sign not in self.h_inf:
            return None
        out = self.h_inf[sign]
        supp = rational_support(x)
        for p in sorted(set(supp) | set(rational_support(self.alpha0))):
            k = supp.get(p, 0)
            factor = self.local.get(p, {}).get(k)
            if factor is None:
                return None
            out = out * factor
        return out


def factorize(h: SampledFunction, alpha0) -> Factorization:
    """Explicit factors: h_inf(s) = h(s |a0|), h_p(k) = h(a0 |a0|_p p^k) / h(a0).

    The opposite-sign factor is h(-a0) itself, not h(-a0) / h(a0); only the
    former reconstructs h at negative arguments.
    """
    alpha0 = Fraction(alpha0)
    base = h.get(alpha0)
    if base is None or base.is_zero:
        raise ArithmeticDomainError(f"h({alpha0}) must be sampled and nonzero")
    s0 = _sign(alpha0)
    h_inf = {s0: base}
    if -alpha0 in h:
        h_inf[-s0] = h[-alpha0]
    a0_supp = rational_support(alpha0)
    primes = set(a0_supp)
    for x in h.values:
        primes |= set(rational_support(x))
    local: dict[int, dict[int, PolarValue]] = {}
    for p in sorted(primes):
        stripped = alpha0 / Fraction(p) ** a0_supp.get(p, 0)
        ks = {rational_support(x).get(p, 0) for x in h.values} | {a0_supp.get(p, 0), 0}
        table = {}
        for k in sorted(ks):
            v = h.get(stripped * Fraction(p) ** k)
            if v is not None:
                table[k] = v / base
        local[p] = table
    return Factorization(alpha0, h_inf, local)


def subgroup_condition(G: Iterable[int], S: SupportSet) -> bool:
    """For all g1 in G, g2 in image(S) some b1, b2 in S with disjoint supports hit (g1, g2)."""
    N = S.modulus
    members = [s for s in S.elements if _in_GN(s, N)]
    by_residue: dict[int, list[tuple[Fraction, frozenset]]] = {}
    for s in members:
        by_residue.setdefault(r_N(s, N), []).append((s, frozenset(rational_support(s))))
    for g1 in sorted(set(x % N for x in G)):
        for g2 in sorted(S.image):
            found = any(
                not (p1 & p2)
                for _, p1 in by_residue.get(g1, ())
                for _, p2 in by_residue.get(g2, ())
            )
            if not found:
                return False
    return True


def _in_GN(s: Fraction, N: int) -> bool:
    try:
        r_N(s, N)
        return True
    except ArithmeticDomainError:
        return False


def find_character(h: SampledFunction, N: int) -> tuple[DirichletCharacter, PolarValue] | None:
    """Search for (psi, c) with h(x) = c psi(r_N(x)) on every sampled x in G_N."""
    pts = [x for x in h.values if _in_GN(x, N)]
    anchor = next((x for x in pts if not h[x].is_zero), None)
    if anchor is None:
        return None
    for psi in enumerate_characters(N):
        c = h[anchor] / evaluate(psi, r_N(anchor, N))
        if all(h[x] == c * evaluate(psi, r_N(x, N)) for x in pts):
            return psi, c
    return None


# ---------------------------------------------------------------- Satake recurrence


def satake_sequence(loc: SatakeLocal, kmax: int) -> list[Fraction]:
    """a_0..a_kmax from a_{k+1} = t a_k - n a_{k-1}, a_0 = 1, a_{-1} = 0."""
    t, n = Fraction(loc.trace), Fraction(loc.norm)
    prev, cur = Fraction(0), Fraction(1)
    out = [cur]
    for _ in range(kmax):
        prev, cur = cur, t * cur - n * prev
        out.append(cur)
    return out


def satake_value(loc: SatakeLocal, k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be nonnegative")
    return satake_sequence(loc, k)[k]


def vanishing_modulus(loc: SatakeLocal, search_bound: int = 50) -> int | None:
    """Least m > 1 with a_k = 0 exactly when k = -1 mod m (k <= bound), or None."""
    if search_bound < 2:
        raise ValueError("search_bound must be at least 2")
    seq = satake_sequence(loc, search_bound)
    zeros = [k for k, v in enumerate(seq) if v == 0]
    if not zeros:
        return None
    m = zeros[0] + 1
    expected = list(range(m - 1, search_bound + 1, m))
    if zeros != expected:
        raise VanishingPatternError(
            f"zeros at {zeros[:8]} for p={loc.p} are not the progression k = -1 mod {m}"
        )
    return m


# ---------------------------------------------------------------- text formats

_COMMENT = re.compile(r"#.*$")


def _parse_fraction(tok: str, lineno: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise SampleFormatError(f"line {lineno}: cannot parse {tok!r} as a rational") from None


def parse_sampled_function(text: str, modulus: int | None = None) -> SampledFunction:
    """Lines ``<point> <magnitude> <angle>``; ``#`` starts a comment; magnitude 0 is zero."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", raw).strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 3:
            raise SampleFormatError(f"line {lineno}: expected 3 fields, got {len(toks)}")
        x, mag, ang = (_parse_fraction(t, lineno) for t in toks)
        if x == 0:
            raise SampleFormatError(f"line {lineno}: sample point must be nonzero")
        if mag < 0:
            raise SampleFormatError(f"line {lineno}: magnitude must be nonnegative")
        if x in values:
            raise SampleFormatError(f"line {lineno}: duplicate sample point {x}")
        values[x] = PolarValue(mag, ang)
    return SampledFunction(values, modulus)


def parse_support_set(text: str, modulus: int) -> SupportSet:
    elements = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _COMMENT.sub("", raw).strip()
        for tok in line.split():
            x = _parse_fraction(tok, lineno)
            if x == 0:
                raise SampleFormatError(f"line {lineno}: 0 cannot be in a support set")
            elements.add(x)
    return SupportSet(frozenset(elements), modulus)


def format_sampled_function(h: SampledFunction) -> str:
    lines = [f"{x} {v.magnitude} {v.angle}" for x, v in h.values.items()]
    return "\n".join(lines) + "\n"
