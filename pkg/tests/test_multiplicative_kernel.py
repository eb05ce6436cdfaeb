import random
from fractions import Fraction

import pytest

from cuspmult import multiplicative_kernel as mk
from cuspmult.dirichlet import enumerate_characters, evaluate
from cuspmult.multiplicative_kernel import (
    SampledFunction,
    SampleFormatError,
    SatakeLocal,
    SupportSet,
    VanishingPatternError,
    admissible,
    coprime_condition,
    factorize,
    find_character,
    format_sampled_function,
    is_multiplicative,
    parse_sampled_function,
    parse_support_set,
    satake_value,
    sign_condition,
    subgroup_condition,
    vanishing_modulus,
    weak_criterion,
)
from cuspmult.oracle_suite import brute_force_witness, perturb, synthetic_multiplicative
from cuspmult.polar import PolarValue
from cuspmult.residue_arith import ArithmeticDomainError, r_N


def character_sample(chi, N, points):
    """psi(r_N(x)) on G_N and 0 elsewhere."""
    vals = {}
    for x in points:
        try:
            vals[x] = evaluate(chi, r_N(x, N))
        except ArithmeticDomainError:
            vals[x] = PolarValue.zero()
    return SampledFunction(vals)


def odd_rationals(limit):
    pts = set()
    for a in range(1, limit, 2):
        for b in range(1, limit, 2):
            pts.add(Fraction(a, b))
    return sorted(pts)


@pytest.mark.parametrize(
    "q, expected",
    [
        ((2, 4, 3, 9), True),
        ((2, 3, 6, 1), False),
        ((Fraction(1, 2), 8, Fraction(5, 7), 35), True),
        ((1, 1, 1, 1), True),
    ],
)
def test_coprime_condition_examples(q, expected):
    assert coprime_condition(*q) is expected


def test_sign_condition():
    assert sign_condition(-2, 4, 3, 9)
    assert sign_condition(2, 4, -3, -9)
    assert not sign_condition(-2, 4, 3, -9)
    assert not admissible(-1, 1, 1, -1)
    assert admissible(-1, 1, 3, 5)


def test_constant_function_is_multiplicative():
    h = SampledFunction({x: PolarValue.one() for x in range(1, 31)})
    res = is_multiplicative(h)
    assert res and res.witness is None and res.checked > 0


def test_character_sample_is_multiplicative():
    chi = next(c for c in enumerate_characters(8) if c.label == "8:[1,1]")
    pts = odd_rationals(20)[:50]
    assert len(pts) == 50
    assert is_multiplicative(character_sample(chi, 8, pts))


def test_additive_shift_is_rejected_with_minimal_witness():
    h = SampledFunction({n: PolarValue.unit(Fraction(n % 5, 5)) for n in range(1, 31)})
    res = is_multiplicative(h)
    assert not res
    assert res.witness == brute_force_witness(h)
    a1, a2, b1, b2 = res.witness
    assert admissible(a1, a2, b1, b2)
    assert h[a1 * b1] * h[a2 * b2] != h[a1 * b2] * h[a2 * b1]


def test_arbitrary_sign_factor_is_accepted():
    # h(x) = h_inf(sign x) |x| with unrelated values at +1 and -1
    pts = [s * Fraction(n) for n in range(1, 13) for s in (1, -1)]
    vals = {x: PolarValue(3 * abs(x), Fraction(1, 3)) if x < 0 else PolarValue(x, 0) for x in pts}
    assert is_multiplicative(SampledFunction(vals))


def test_roundtrip_against_brute_force():
    rng = random.Random(11)
    for _ in range(15):
        h = synthetic_multiplicative(rng)
        assert is_multiplicative(h)
        assert brute_force_witness(h) is None
        bad = perturb(h, rng)
        res = is_multiplicative(bad)
        assert res.witness == brute_force_witness(bad)


def test_witness_is_deterministic():
    h = SampledFunction({n: PolarValue(n + 1, 0) for n in range(1, 25)})
    assert is_multiplicative(h).witness == is_multiplicative(SampledFunction(dict(reversed(list(h.values.items()))))).witness


def test_factorize_constant():
    h = SampledFunction({x: 1 for x in range(1, 21)})
    f = factorize(h, 1)
    assert f.h_inf == {1: PolarValue.one()}
    assert all(v == PolarValue.one() for table in f.local.values() for v in table.values())


def test_factorize_absolute_value():
    h = SampledFunction({x: abs(x) for x in range(-20, 21) if x})
    f = factorize(h, 1)
    assert f.h_inf[-1] == PolarValue.one()
    for p, table in f.local.items():
        for k, v in table.items():
            assert v == PolarValue.from_rational(Fraction(p) ** k)


def test_factorize_character():
    chi = enumerate_characters(5)[1]
    h = character_sample(chi, 5, range(1, 40))
    f = factorize(h, 1)
    for p in (2, 3, 7):
        assert f.local[p][1] == evaluate(chi, p)
    assert f.local[5][1] == PolarValue.zero()


def test_factorize_reconstructs_negative_arguments():
    rng = random.Random(2)
    for alpha0 in (1, 2, Fraction(-1, 3)):
        for _ in range(10):
            h = synthetic_multiplicative(rng)
            if h[alpha0].is_zero:
                continue
            f = factorize(h, alpha0)
            for x, v in h.values.items():
                assert f.value(x) == v


def test_factorize_needs_nonzero_anchor():
    h = SampledFunction({1: 0, 2: 1})
    with pytest.raises(ArithmeticDomainError):
        factorize(h, 1)
    with pytest.raises(ArithmeticDomainError):
        factorize(h, 3)


def test_product_with_function_free_off_the_support():
    rng = random.Random(5)
    for _ in range(10):
        h1 = synthetic_multiplicative(rng)
        zeros = [x for x, v in h1.values.items() if v.is_zero]
        if not zeros:
            continue
        h2 = dict(synthetic_multiplicative(rng).values)
        for x in zeros:
            h2[x] = PolarValue(rng.randint(1, 9), Fraction(rng.randint(0, 9), 10))
        assert is_multiplicative(h1.times(SampledFunction(h2)))


def test_weak_criterion_examples():
    S = SupportSet(frozenset(range(1, 30, 2)), 8)
    chi = enumerate_characters(8)[3]
    assert weak_criterion(character_sample(chi, 8, range(1, 30, 2)), S)
    shift = SampledFunction({n: PolarValue.unit(Fraction(n % 5, 5)) for n in range(1, 30, 2)})
    res = weak_criterion(shift, S)
    assert not res and res.witness is not None
    assert weak_criterion(shift, [])


def test_weak_criterion_ignores_points_outside_the_set():
    h = SampledFunction({1: 1, 3: 1, 5: 1, 15: 1, 2: 7})
    assert weak_criterion(h, [1, 3, 5, 15])


def test_subgroup_condition_examples():
    units = [1, 3, 5, 7]
    assert subgroup_condition(units, SupportSet(frozenset([1, 3, 5, 7, 11, 13, 15]), 8))
    assert not subgroup_condition(units, SupportSet(frozenset([1, 3, 5, 7]), 8))
    assert subgroup_condition([1], SupportSet(frozenset([1]), 8))


@pytest.mark.parametrize("N", [4, 8, 9, 12])
def test_find_character_recovers_the_character(N):
    pts = [n for n in range(1, 60) if all(n % p for p in (2, 3))]
    for chi in enumerate_characters(N):
        c = PolarValue(3, Fraction(1, 8))
        h = SampledFunction({x: c * evaluate(chi, r_N(x, N)) for x in pts})
        psi, found = find_character(h, N)
        assert found == c
        assert all(evaluate(psi, r_N(x, N)) == evaluate(chi, r_N(x, N)) for x in pts)


def test_find_character_rejects_non_characters():
    h = SampledFunction({n: PolarValue(n, 0) for n in range(1, 20, 2)})
    assert find_character(h, 8) is None
    assert find_character(SampledFunction({3: 0}), 8) is None


@pytest.mark.parametrize(
    "t, n, m",
    [(3, 1, None), (0, 1, 2), (1, 1, 3), (2, 2, 4), (3, 3, 6), (2, 1, None), (-1, 1, 3)],
)
def test_vanishing_modulus_examples(t, n, m):
    assert vanishing_modulus(SatakeLocal(2, Fraction(t), Fraction(n))) == m


def test_satake_values_match_closed_form():
    loc = SatakeLocal.from_roots(5, 2, 3)
    for k in range(12):
        assert satake_value(loc, k) == sum(2**i * 3 ** (k - i) for i in range(k + 1))
    with pytest.raises(ValueError):
        satake_value(loc, -1)


def test_irregular_zero_pattern_is_an_error(monkeypatch):
    monkeypatch.setattr(mk, "satake_sequence", lambda loc, kmax: [1, 0, 1, 1, 0] + [1] * (kmax - 4))
    with pytest.raises(VanishingPatternError):
        vanishing_modulus(SatakeLocal(2, Fraction(0), Fraction(1)), 10)


def test_parse_and_format_roundtrip():
    text = "# sample\n1 1 0\n-1/2 3/4 1/3  # trailing\n\n5 0 0\n"
    h = parse_sampled_function(text)
    assert h[Fraction(-1, 2)] == PolarValue(Fraction(3, 4), Fraction(1, 3))
    assert h[5].is_zero
    assert parse_sampled_function(format_sampled_function(h)) == h


@pytest.mark.parametrize(
    "text, line",
    [
        ("1 1 0\n2 x 0\n", 2),
        ("1 1\n", 1),
        ("1 1 0\n\n0 1 0\n", 3),
        ("1 -1 0\n", 1),
        ("1 1 0\n1 2 0\n", 2),
        ("1 1/0 0\n", 1),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(SampleFormatError, match=f"line {line}:"):
        parse_sampled_function(text)


def test_parse_support_set():
    S = parse_support_set("1 3 5\n7/9 # odd\n", 8)
    assert S.elements == frozenset({1, 3, 5, Fraction(7, 9)})
    assert S.image == frozenset({1, 3, 5, 7 * 9 % 8})
    with pytest.raises(SampleFormatError, match="line 2"):
        parse_support_set("1\n0\n", 8)


def test_zero_sample_point_rejected():
    with pytest.raises(ArithmeticDomainError):
        SampledFunction({0: 1})
