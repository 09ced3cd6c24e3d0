from __future__ import annotations

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critgroup.graph import reduced_laplacian
from critgroup.instances import k44
from critgroup.intalg import (
    AbelianGroup,
    IntAlgError,
    NotASummandError,
    coprime_base,
    coprime_part,
    det,
    direct_sum,
    elementary_divisors,
    factorize,
    from_elementary_divisors,
    hnf,
    hnf_basis,
    is_isomorphic,
    is_prime,
    m_equivalent,
    matmul,
    order,
    p_sylow,
    smith_via_minors,
    snf,
    subtract_summand,
    xgcd,
    xgcd_list,
)

G_ = AbelianGroup.from_orders

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)
groups = st.lists(st.integers(1, 60), max_size=4).map(G_)


def _is_echelon(H):
    last = -1
    seen_zero = False
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero or nz[0] <= last:
            return False
        last = nz[0]
    return True


def test_xgcd():
    for a, b in [(12, 18), (0, 5), (7, 0), (-4, 6), (0, 0)]:
        x, y, g = xgcd(a, b)
        assert g >= 0 and a * x + b * y == g
        assert g == abs(math.gcd(a, b))
    coeffs, g = xgcd_list([6, 10, 15])
    assert g == 1 and sum(c * v for c, v in zip(coeffs, [6, 10, 15])) == 1


def test_hnf_identity():
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert hnf(I) == (I, I)


def test_hnf_small_example():
    H, U = hnf([[2, 4], [1, 3]])
    assert matmul(U, [[2, 4], [1, 3]]) == H
    assert abs(det(U)) == 1
    assert _is_echelon(H)
    # same row space as [[1, 3], [0, 2]]; pivots 1 and 2 either way
    assert hnf_basis([[1, 3], [0, 2]], 2) == hnf_basis(H, 2)
    assert [H[0][0], H[1][1]] == [1, 2]


def test_hnf_zero():
    Z = [[0, 0], [0, 0]]
    assert hnf(Z)[0] == Z


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(M):
    H, U = hnf(M)
    assert matmul(U, M) == H
    assert abs(det(U)) == 1
    assert _is_echelon(H)
    for r, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            j = nz[0]
            assert row[j] > 0
            assert all(0 <= H[i][j] < row[j] for i in range(r))


def test_snf_examples():
    assert snf([[2, 0], [0, 3]]) == [1, 6]
    assert G_(snf([[2, 0], [0, 3]])) == AbelianGroup.cyclic(6)


def test_snf_k44_reduced_laplacian():
    # 7x7 matrix, so seven factors
    G, _ = k44()
    assert snf(reduced_laplacian(G)) == [1, 1, 4, 4, 4, 4, 16]


def test_snf_random_4x4_against_minors():
    rng = random.Random(4)
    for _ in range(50):
        M = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        assert snf(M) == smith_via_minors(M)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_matches_minor_oracle(M):
    d = snf(M)
    assert d == smith_via_minors(M)
    assert all(b % a == 0 for a, b in zip(d, d[1:]))


def test_group_canonical_form():
    A = G_([2, 6])
    assert A.invariant_factors == (2, 6)
    assert G_([4, 8, 2]).invariant_factors == (2, 4, 8)
    assert G_([1, 1]).is_trivial
    assert str(G_([])) == "trivial"
    assert str(G_([16, 4, 4, 4, 4])) == "Z/4 x Z/4 x Z/4 x Z/4 x Z/16"
    with pytest.raises(IntAlgError):
        AbelianGroup((4, 2))


def test_group_examples():
    assert is_isomorphic(G_([2, 6]), G_([2, 2, 3]))
    assert p_sylow(AbelianGroup.cyclic(12), 2) == AbelianGroup.cyclic(4)
    assert direct_sum(G_([4, 8]), G_([2])).invariant_factors == (2, 4, 8)
    with pytest.raises(IntAlgError):
        p_sylow(AbelianGroup.cyclic(12), 4)


def test_m_equivalent_examples():
    assert m_equivalent(G_([2, 6]), G_([2, 2, 3]), 6)
    assert m_equivalent(G_([4]), G_([2, 2]), 2)
    assert not m_equivalent(G_([4]), G_([2, 2]), 3)
    assert not m_equivalent(G_([3]), G_([5]), 15)


def test_subtract_summand_examples():
    assert subtract_summand(G_([2, 2, 4]), G_([4])) == G_([2, 2])
    with pytest.raises(NotASummandError):
        subtract_summand(G_([2, 2, 4]), G_([8]))
    assert subtract_summand(G_([12, 6]), G_([3])) == G_([2, 12])


def test_primes_and_factorization():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert factorize(1) == {}
    with pytest.raises(IntAlgError):
        factorize(10**7 + 19, limit=10**3)


def test_coprime_base():
    base = coprime_base([12, 18])
    assert all(math.gcd(a, b) == 1 for a, b in itertools.combinations(base, 2))
    for v in (12, 18):
        r = v
        for q in base:
            while r % q == 0:
                r //= q
        assert r == 1


def test_elementary_divisors_round_trip():
    A = G_([2, 12, 360])
    assert sorted(elementary_divisors(A)) == sorted([2, 4, 3, 8, 9, 5])
    assert from_elementary_divisors(elementary_divisors(A)) == A


@settings(max_examples=200, deadline=None)
@given(groups, groups, st.integers(1, 30))
def test_isomorphism_implies_m_equivalence(A, B, m):
    if is_isomorphic(A, B):
        assert m_equivalent(A, B, m)
    assert m_equivalent(A, B, 1) == is_isomorphic(A, B)
    assert m_equivalent(A, A, m)


@settings(max_examples=200, deadline=None)
@given(groups, groups, groups)
def test_direct_sum_commutative_associative(A, B, C):
    assert direct_sum(A, B) == direct_sum(B, A)
    assert direct_sum(direct_sum(A, B), C) == direct_sum(A, direct_sum(B, C))
    assert order(direct_sum(A, B)) == order(A) * order(B)


@settings(max_examples=200, deadline=None)
@given(groups, st.sampled_from([2, 3, 5, 7]))
def test_sylow_times_coprime_part(A, p):
    assert order(p_sylow(A, p)) * order(coprime_part(A, p)) == order(A)


@settings(max_examples=200, deadline=None)
@given(groups, groups)
def test_subtract_summand_inverts_direct_sum(A, B):
    assert subtract_summand(direct_sum(A, B), B) == A
