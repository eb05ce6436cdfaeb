import random
from itertools import product

import pytest

from cuspmult.cusp_geometry import sl2z_index
from cuspmult.oracle_suite import m1_subgroup
from cuspmult.residue_arith import ArithmeticDomainError, crt_split, divisors
from cuspmult.sl2_finite import (
    GroupSizeError,
    Matrix2Mod,
    SubgroupSpec,
    borel_generators,
    bottom_row_image,
    commutator,
    commutator_identity_check,
    commutator_lower_left_formula,
    commutator_subgroup,
    contains_subgroup,
    double_cosets,
    generate_closure,
    identity_quad,
    inv,
    iter_members,
    lower_unipotent,
    mul,
    sl2_order,
    standard_generators,
    subgroup,
)


def det_one_quads(N):
    return {
        (a, b, c, d)
        for a, b, c, d in product(range(N), repeat=4)
        if (a * d - b * c) % N == 1 % N
    }


def test_matrix_validation():
    with pytest.raises(ArithmeticDomainError):
        Matrix2Mod(1, 1, 1, 1, 5)
    m = Matrix2Mod(1, 1, 0, 1, 5)
    assert (m**5).quad == (1, 0, 0, 1)
    assert (m * m.inverse()).quad == identity_quad(5)


@pytest.mark.parametrize("N", range(1, 25))
def test_closure_order_matches_enumeration(N):
    G = generate_closure(standard_generators(N), N)
    assert len(G) == sl2_order(N)
    if N <= 12:
        assert G.elements == det_one_quads(N)


def test_closure_examples():
    gens = [Matrix2Mod(1, 1, 0, 1, 3), Matrix2Mod(1, 0, 1, 1, 3)]
    assert len(generate_closure(gens)) == 24
    assert len(generate_closure([identity_quad(7)], 7)) == 1
    full = generate_closure(borel_generators(8) + [lower_unipotent(1, 8)], 8)
    assert len(full) == sl2_order(8)


def test_closure_is_closed():
    rng = random.Random(3)
    S = subgroup(SubgroupSpec.gamma0(4, 24))
    elems = sorted(S.elements)
    for _ in range(500):
        s, t = rng.choice(elems), rng.choice(elems)
        assert mul(s, t, 24) in S.elements
        assert inv(s, 24) in S.elements


def test_closure_is_deterministic():
    a = generate_closure(standard_generators(12), 12)
    b = generate_closure(standard_generators(12), 12)
    assert a.elements == b.elements and a.generators == b.generators


@pytest.mark.parametrize("N", [12, 24, 36, 72])
def test_crt_consistency(N):
    rng = random.Random(N)
    full = sorted(iter_members(SubgroupSpec.gamma0(1, N)))
    gens = [rng.choice(full) for _ in range(2)]
    S = generate_closure(gens, N)
    parts = {}
    for q in crt_split(N):
        parts[q] = generate_closure([tuple(x % q for x in g) for g in gens], q).elements
    pullback = {x for x in full if all(tuple(v % q for v in x) in parts[q] for q in parts)}
    # the closure surjects onto each local closure and lies inside the pullback
    assert S.elements <= pullback
    for q, local in parts.items():
        assert {tuple(v % q for v in x) for x in S.elements} == local


@pytest.mark.parametrize("N, M", [(8, 2), (9, 3), (12, 12), (24, 4), (16, 1)])
def test_borel_generation_cases(N, M):
    closure = generate_closure(borel_generators(N) + [lower_unipotent(M, N)], N)
    assert closure.elements == frozenset(iter_members(SubgroupSpec.gamma0(M, N)))


def test_commutator_subgroup_of_abelian_group_is_trivial():
    diag = generate_closure([(2, 0, 0, 3)], 5)
    assert len(commutator_subgroup(diag)) == 1


def _all_pairs_derived(H):
    N = H.modulus
    elems = sorted(H.elements)
    comms = {commutator(x, y, N) for x in elems for y in elems}
    return generate_closure(sorted(comms), N)


# every Gamma_0(M) mod N with N <= 16 small enough for the all-pairs oracle
ALL_PAIRS_CASES = [
    (N, M)
    for N in range(2, 17)
    for M in divisors(N)
    if sl2_order(N) // sl2z_index(M) <= 900
]


@pytest.mark.parametrize("N, M", ALL_PAIRS_CASES)
def test_commutator_subgroup_equals_all_pairs(N, M):
    H = subgroup(SubgroupSpec.gamma0(M, N))
    assert commutator_subgroup(H) == _all_pairs_derived(H)


def test_double_coset_examples():
    G = generate_closure(standard_generators(2), 2)
    assert len(double_cosets(G, G)) == 1
    trivial = generate_closure([identity_quad(2)], 2)
    classes = double_cosets(trivial, G)
    assert len(classes) == 6 and all(len(c) == 1 for c in classes)
    H = subgroup(SubgroupSpec.gamma1(3, 3))
    classes = double_cosets(H, generate_closure(standard_generators(3), 3))
    assert sorted(map(len, classes)) == [3, 3, 9, 9]
    assert frozenset().union(*classes) == frozenset(det_one_quads(3))


def test_double_cosets_need_containment():
    with pytest.raises(ArithmeticDomainError):
        double_cosets(subgroup(SubgroupSpec.gamma0(2, 4)), subgroup(SubgroupSpec.gamma1(4, 4)))


def test_commutator_identity_examples():
    A = Matrix2Mod(3, 2, 4, 3, 32)
    assert commutator_identity_check(A, A, 4)
    assert commutator_lower_left_formula(A.quad, A.quad, 4, 32) == 0
    for N, M in [(32, 4), (27, 3), (20, 5)]:
        assert commutator_identity_check(Matrix2Mod(1, 0, M, 1, N), Matrix2Mod(1, 1, 0, 1, N), M)


def test_commutator_identity_random_pairs():
    rng = random.Random(7)
    members = sorted(iter_members(SubgroupSpec.gamma0(4, 32)))
    for _ in range(1000):
        A = Matrix2Mod.from_quad(rng.choice(members), 32)
        B = Matrix2Mod.from_quad(rng.choice(members), 32)
        assert commutator_identity_check(A, B, 4)


def test_commutator_identity_rejects_bad_input():
    with pytest.raises(ArithmeticDomainError):
        commutator_lower_left_formula((1, 0, 1, 1), (1, 0, 0, 1), 2, 8)


def test_bottom_row_examples():
    assert bottom_row_image(generate_closure([identity_quad(16)], 16), 16) == {(0, 1)}
    assert bottom_row_image(subgroup(SubgroupSpec.gamma1(8, 16)), 8) == {(0, 1)}
    with pytest.raises(ArithmeticDomainError):
        bottom_row_image(subgroup(SubgroupSpec.gamma1(8, 16)), 3)


def test_contains_subgroup_examples():
    full = generate_closure(standard_generators(12), 12)
    assert contains_subgroup(full, SubgroupSpec.gamma1(12, 12))
    for N in (32, 64):
        gbar = m1_subgroup(N, 4)
        assert not contains_subgroup(gbar, SubgroupSpec.gamma1(16, N))
        assert contains_subgroup(gbar, SubgroupSpec.gamma1(32, N))
    gbar = m1_subgroup(16, 2)
    assert contains_subgroup(gbar, SubgroupSpec.gamma1(8, 16))
    assert not contains_subgroup(gbar, SubgroupSpec.gamma1(4, 16))


def test_spec_validation():
    with pytest.raises(ArithmeticDomainError):
        SubgroupSpec.gamma0(3, 8)
    with pytest.raises(ValueError):
        SubgroupSpec("Weird", 8)


def test_memory_guard(monkeypatch):
    monkeypatch.setenv("CUSPMULT_MAX_ORDER", "1000")
    with pytest.raises(GroupSizeError):
        generate_closure(standard_generators(16), 16)
    assert len(generate_closure(standard_generators(8), 8)) == 384
