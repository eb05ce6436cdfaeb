import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cuspmult.dirichlet import (
    DirichletCharacter,
    character_order,
    enumerate_characters,
    evaluate,
    lift_gamma0,
)
from cuspmult.polar import PolarValue
from cuspmult.residue_arith import ArithmeticDomainError, euler_phi, units_mod
from cuspmult.sl2_finite import SubgroupSpec, iter_members, mul


def test_evaluate_examples():
    assert evaluate(DirichletCharacter.trivial(7), 3) == PolarValue.one()
    chi4 = DirichletCharacter(4, (1,))
    assert evaluate(chi4, 3) == PolarValue.unit(Fraction(1, 2))
    assert evaluate(chi4, 3).to_rational() == -1
    assert evaluate(chi4, 6) == PolarValue.zero()


def test_lift_examples():
    for chi in enumerate_characters(8):
        assert lift_gamma0(chi, (1, 0, 0, 1)) == PolarValue.one()
        assert lift_gamma0(chi, (1, 1, 0, 1)) == PolarValue.one()
    chi = next(c for c in enumerate_characters(8) if c.angle_of(5) == Fraction(1, 2))
    assert lift_gamma0(chi, (5, 3, 0, 5)) == PolarValue.unit(Fraction(1, 2))
    with pytest.raises(ArithmeticDomainError):
        lift_gamma0(chi, (1, 0, 1, 1))


@pytest.mark.parametrize("N, count", [(1, 1), (8, 4), (9, 6), (24, 8)])
def test_enumeration_counts(N, count):
    chars = enumerate_characters(N)
    assert len(chars) == count == euler_phi(N)
    assert len(set(chars)) == count
    assert chars == enumerate_characters(N)


def test_character_order_examples():
    assert character_order(DirichletCharacter.trivial(11)) == 1
    assert character_order(DirichletCharacter(4, (1,))) == 2
    chi = DirichletCharacter(5, (1,))
    assert chi.angle_of(2) == Fraction(1, 4)
    assert character_order(chi) == 4


def test_character_order_is_least_trivial_power():
    for N in (7, 8, 9, 12, 15, 16):
        for chi in enumerate_characters(N):
            powers = [chi]
            while not powers[-1].is_trivial():
                powers.append(powers[-1] * chi)
            assert character_order(chi) == len(powers)


def test_label_roundtrip():
    chi = DirichletCharacter.parse("8:[1,0]")
    assert chi.label == "8:[1,0]"
    assert DirichletCharacter.parse(chi.label) == chi
    for bad in ("8", "8:[1]", "x:[1,0]", "8:[a,0]"):
        with pytest.raises(ValueError):
            DirichletCharacter.parse(bad)


@given(st.sampled_from([5, 8, 9, 12, 15, 16, 21]), st.integers(1, 10**5), st.integers(1, 10**5))
def test_multiplicativity_and_periodicity(N, m, n):
    for chi in enumerate_characters(N):
        assert evaluate(chi, m * n) == evaluate(chi, m) * evaluate(chi, n)
        assert evaluate(chi, n) == evaluate(chi, n + N)


@pytest.mark.parametrize("N", range(2, 41))
def test_characters_separate_units(N):
    chars = enumerate_characters(N)
    for u in units_mod(N):
        if u != 1:
            assert any(chi.angle_of(u) != 0 for chi in chars)


@pytest.mark.parametrize("N", [8, 9, 12])
def test_lift_is_a_homomorphism(N):
    rng = random.Random(N)
    members = sorted(iter_members(SubgroupSpec.gamma0(N, N)))
    for chi in enumerate_characters(N):
        for _ in range(30):
            g1, g2 = rng.choice(members), rng.choice(members)
            assert lift_gamma0(chi, mul(g1, g2, N)) == lift_gamma0(chi, g1) * lift_gamma0(chi, g2)


def test_values_are_roots_of_unity_of_the_right_order():
    for chi in enumerate_characters(20):
        m = character_order(chi)
        for u in units_mod(20):
            assert (chi.angle_of(u) * m).denominator == 1
        assert chi.angle_of(10) is None and gcd(10, 20) > 1
