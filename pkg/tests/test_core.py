from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modsubgroups.core import (
    IDENTITY,
    NEG_INF,
    POS_INF,
    R,
    S,
    T,
    Cusp,
    Perm,
    ProjMatrix,
    cycle_type,
    fixed_points,
    is_transitive,
    make_cusp,
    mat_inv,
    mat_mul,
    normalize,
    orbits,
    perm_compose,
    perm_inverse,
)


def test_normalize_examples():
    assert normalize(-1, 0, 0, -1) == IDENTITY
    assert normalize(0, -1, 1, 0) == ProjMatrix(0, -1, 1, 0)
    assert normalize(0, 1, -1, 0) == ProjMatrix(0, -1, 1, 0)


def test_normalize_rejects_bad_determinant():
    with pytest.raises(ValueError):
        normalize(1, 1, 1, 1)


def test_unnormalized_projmatrix_rejected():
    with pytest.raises(ValueError):
        ProjMatrix(0, 1, -1, 0)


def test_overflow_guard():
    big = 2**64
    with pytest.raises(OverflowError):
        normalize(1, big, 0, 1)


def test_mat_mul_examples():
    assert mat_mul(S, S) == IDENTITY
    assert mat_mul(S, T) == ProjMatrix(0, -1, 1, 1) == R
    assert R**3 == IDENTITY
    assert mat_mul(T, T) == ProjMatrix(1, 2, 0, 1)


def test_parse_and_rows():
    M = ProjMatrix.parse("[[2, 1], [1, 1]]")
    assert M.rows() == [[2, 1], [1, 1]]
    assert ProjMatrix.parse("[[-1,0],[0,-1]]") == IDENTITY
    with pytest.raises(ValueError):
        ProjMatrix.parse("[[1,2],[3,4]]")
    with pytest.raises(ValueError):
        ProjMatrix.parse("nonsense")


def test_make_cusp_examples():
    assert make_cusp(2, 4) == Cusp(1, 2)
    assert make_cusp(-1, 0) == NEG_INF
    assert make_cusp(3, -6) == Cusp(-1, 2)


def test_infinite_markers_distinct_but_projectively_equal():
    assert NEG_INF != POS_INF
    assert NEG_INF.projectively_equal(POS_INF)
    assert NEG_INF < Cusp(-5, 1) < Cusp(0, 1) < Cusp(7, 2) < POS_INF


def test_perm_helpers_examples():
    assert fixed_points(Perm.from_cycles("(1,2)", 3)) == {3}
    assert cycle_type(Perm.from_cycles("(1,2)", 2)) == {2: 1}
    assert cycle_type(Perm.from_cycles("(1,2,4,5,3)", 6)) == {5: 1, 1: 1}


def test_orbits_examples():
    assert orbits([], 3) == [frozenset({1}), frozenset({2}), frozenset({3})]
    gens = [Perm.from_cycles("(1,2)", 3), Perm.from_cycles("(2,3)", 3)]
    assert orbits(gens, 3) == [frozenset({1, 2, 3})]
    assert orbits([Perm.from_cycles("(1,2)", 3)], 3) == [frozenset({1, 2}), frozenset({3})]


def test_is_transitive_examples():
    assert is_transitive([Perm.from_cycles("(1,2)", 2)], 2)
    assert not is_transitive([Perm.from_cycles("(1,2)", 3)], 3)


def test_cycle_notation_round_trip():
    p = Perm.from_cycles("(1,3)(2,5,4)", 6)
    assert str(p) == "(1,3)(2,5,4)"
    assert str(Perm.identity(4)) == "()"
    assert Perm.from_cycles(str(p), 6) == p


def test_composition_applies_right_factor_first():
    p = Perm.from_cycles("(1,2)", 3)
    q = Perm.from_cycles("(2,3)", 3)
    assert perm_compose(p, q)(3) == p(q(3)) == 1
    assert (p * q)(3) == 1
    assert (q * p)(3) == 2


matrices = st.lists(st.sampled_from([S, T, mat_inv(T)]), max_size=10).map(
    lambda word: _product(word)
)


def _product(word):
    M = IDENTITY
    for x in word:
        M = mat_mul(M, x)
    return M


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_normalize_idempotent_and_sign_blind(a, b, c):
    if a == 0:
        return
    # pick d so that the determinant is 1, when possible
    if (1 + b * c) % a:
        return
    d = (1 + b * c) // a
    M = normalize(a, b, c, d)
    assert normalize(*M.entries()) == M
    assert normalize(-a, -b, -c, -d) == M


@given(matrices, matrices, matrices)
def test_mat_mul_associative(A, B, C):
    assert mat_mul(mat_mul(A, B), C) == mat_mul(A, mat_mul(B, C))


@given(matrices)
def test_mat_inverse(A):
    assert mat_mul(A, mat_inv(A)) == IDENTITY


perms = st.integers(1, 9).flatmap(lambda n: st.permutations(range(1, n + 1))).map(
    lambda xs: Perm(tuple(xs))
)


@given(perms)
def test_perm_inverse_and_order(p):
    one = Perm.identity(p.degree)
    assert perm_compose(p, perm_inverse(p)) == one
    assert (p ** p.order()) == one
    assert sum(len(c) for c in p.cycles(include_fixed=True)) == p.degree


@given(st.lists(perms, max_size=3), st.integers(1, 9))
def test_orbits_partition(gens, n):
    gens = [g for g in gens if g.degree == n]
    parts = orbits(gens, n)
    assert sorted(x for b in parts for x in b) == list(range(1, n + 1))
    for g in gens:
        for b in parts:
            assert {g(x) for x in b} == set(b)
