from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from builders import determinantal_divisors, leibniz_det
from toric_transitions.errors import NotFiniteIndex
from toric_transitions.exact import (
    as_fraction,
    cokernel_presentation,
    determinant,
    matmul,
    nullspace,
    overlattice_cosets,
    primitive,
    rank,
    rref,
    smith_normal_form,
    solve,
)


def test_as_fraction_accepts_strings_and_rejects_bool():
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(4) == Fraction(4)
    with pytest.raises(TypeError):
        as_fraction(True)
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_snf_of_one_by_one():
    res = smith_normal_form([[6]])
    assert res.S == ((6,),)
    assert res.U == ((1,),) and res.V == ((1,),)


def test_snf_of_column_of_ones():
    res = smith_normal_form([[1], [1], [1]])
    assert res.S == ((1,), (0,), (0,))
    assert matmul(matmul(res.U, res.S), res.V) == ((1,), (1,), (1,))


def test_snf_of_identity():
    res = smith_normal_form([[1, 0], [0, 1]])
    assert res.U == res.S == res.V == ((1, 0), (0, 1))


def test_snf_inverse_pairs():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    res = smith_normal_form(M)
    assert res.diagonal == (2, 6, 12)
    assert matmul(matmul(res.L, M), res.R) == res.S


def test_cokernel_of_column_of_ones():
    free, torsion, proj = cokernel_presentation([[1], [1], [1]])
    assert free == 2 and torsion == ()
    assert all(x == 0 for row in matmul(proj, [[1], [1], [1]]) for x in row)


def test_cokernel_of_two():
    free, torsion, _ = cokernel_presentation([[2]])
    assert free == 0 and torsion == (2,)


def test_cokernel_weighted_projective():
    free, torsion, proj = cokernel_presentation([[1], [1], [1], [2], [2], [1]])
    assert free == 5 and torsion == ()
    assert all(x == 0 for row in matmul(proj, [[1], [1], [1], [2], [2], [1]]) for x in row)


def test_overlattice_cosets_examples():
    assert overlattice_cosets([[1, 0], [0, 1]]) == [(0, 0)]
    assert overlattice_cosets([[2]]) == [(Fraction(0),), (Fraction(1, 2),)]
    assert overlattice_cosets([[1, 1], [1, -1]]) == [(0, 0), (Fraction(1, 2), Fraction(1, 2))]


def test_overlattice_cosets_brute_force():
    M = [[1, 1], [1, -1]]
    n = 2
    found = set()
    for a in range(n):
        for b in range(n):
            nu = (Fraction(a, n), Fraction(b, n))
            if all((r[0] * nu[0] + r[1] * nu[1]).denominator == 1 for r in M):
                found.add(nu)
    assert set(overlattice_cosets(M)) == found


def test_overlattice_requires_spanning_rows():
    with pytest.raises(NotFiniteIndex):
        overlattice_cosets([[1, 1]])


def test_rref_solve_nullspace():
    A = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    R, piv = rref(A, 3)
    assert piv == (0, 1) or list(piv) == [0, 1]
    assert rank(A, 3) == 2
    (v,) = nullspace(A, 3)
    assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    x = solve(A, [4, 8, 2], 3)
    assert all(sum(a * xi for a, xi in zip(row, x)) == b for row, b in zip(A, [4, 8, 2]))
    assert solve(A, [1, 0, 0], 3) is None


def test_primitive_scales_to_coprime_integers():
    assert primitive((Fraction(2, 3), Fraction(-4, 3))) == (1, -2)
    with pytest.raises(ValueError):
        primitive((0, 0))


int_matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r))
)


@given(int_matrices)
def test_snf_round_trip(M):
    res = smith_normal_form(M)
    assert [list(r) for r in matmul(matmul(res.U, res.S), res.V)] == M
    assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
    d = [x for x in res.diagonal if x]
    assert all(x >= 0 for x in res.diagonal)
    assert res.diagonal[: len(d)] == tuple(d)
    assert all(d[i + 1] % d[i] == 0 for i in range(len(d) - 1))
    for i, row in enumerate(res.S):
        for j, x in enumerate(row):
            assert i == j or x == 0


small_square = st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n))


@given(small_square)
def test_snf_matches_determinantal_divisors(M):
    res = smith_normal_form(M)
    assert [x for x in res.diagonal if x] == determinantal_divisors(M)


@given(small_square)
def test_determinant_matches_permutation_expansion(M):
    assert determinant(M) == leibniz_det(M)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=2, max_size=2))
def test_coset_count_is_product_of_invariant_factors(M):
    diag = smith_normal_form(M).diagonal
    if 0 in diag:
        with pytest.raises(NotFiniteIndex):
            overlattice_cosets(M)
        return
    cosets = overlattice_cosets(M)
    expected = 1
    for d in diag:
        expected *= d
    assert len(cosets) == len(set(cosets)) == expected
    for nu in cosets:
        assert all(0 <= x < 1 for x in nu)
        assert all(sum(a * x for a, x in zip(row, nu)).denominator == 1 for row in M)
