from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import GF, QQ, Matrix
from sympy.polys.matrices import DomainMatrix

from hcell.errors import NonSplitField
from hcell.field import Field, Quotient, choose_prime, column_basis, inverse, is_invertible, nullspace, rank, rref, solve

PRIMES = [2, 3, 7, 17]


def matrices(max_side=5, lo=-6, hi=6):
    return st.integers(1, max_side).flatmap(
        lambda m: st.integers(1, max_side).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def sympy_rank(rows, p):
    """Independent rank oracle from sympy's domain matrices."""
    dom = GF(p) if p else QQ
    return DomainMatrix([[dom(x) for x in r] for r in rows], (len(rows), len(rows[0])), dom).rank()


@given(matrices(), st.sampled_from(PRIMES + [0]))
def test_rank_matches_sympy(rows, p):
    F = Field(p)
    assert rank(F, F.array(rows)) == sympy_rank(rows, p)


@given(matrices(), st.sampled_from(PRIMES + [0]))
def test_nullspace_is_kernel_with_rank_nullity(rows, p):
    F = Field(p)
    M = F.array(rows)
    K = nullspace(F, M)
    assert F.is_zero(F.matmul(M, K))
    assert K.shape[1] + rank(F, M) == M.shape[1]
    assert rank(F, K) == K.shape[1]


@given(matrices(), st.sampled_from(PRIMES + [0]))
def test_rref_rows_span_row_space(rows, p):
    F = Field(p)
    M = F.array(rows)
    R, piv = rref(F, M)
    assert len(piv) == R.shape[0]
    for i, c in enumerate(piv):
        assert R[i, c] == 1
        assert all(R[j, c] == 0 for j in range(R.shape[0]) if j != i)
    assert rank(F, np.concatenate([R, M], axis=0)) == len(piv)


@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)), st.sampled_from([7, 17, 0]))
def test_inverse(rows, p):
    F = Field(p)
    M = F.array(rows)
    if is_invertible(F, M):
        assert F.equal(F.matmul(M, inverse(F, M)), F.eye(len(rows)))
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(F, M)


@given(matrices(), st.sampled_from([5, 0]), st.data())
def test_solve_consistent_systems(rows, p, data):
    F = Field(p)
    M = F.array(rows)
    x = F.array(data.draw(st.lists(st.integers(-4, 4), min_size=M.shape[1], max_size=M.shape[1])))
    b = F.matmul(M, x)
    sol = solve(F, M, b)
    assert sol is not None and F.equal(F.matmul(M, sol), b)


def test_solve_inconsistent():
    F = Field(7)
    assert solve(F, F.array([[1, 0], [1, 0]]), F.array([1, 2])) is None


@given(matrices(max_side=4), st.sampled_from([3, 0]))
def test_quotient_kills_relations(rows, p):
    F = Field(p)
    R = F.array(rows)
    Q = Quotient(F, R, R.shape[1])
    assert Q.dim == R.shape[1] - rank(F, R)
    assert F.is_zero(F.matmul(Q.proj, R.T))
    assert F.equal(F.matmul(Q.proj, Q.lift), F.eye(Q.dim))


def test_column_basis_spans():
    F = Field(0)
    M = F.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    B = column_basis(F, M)
    assert B.shape[1] == 2 == Matrix([[1, 2, 3], [2, 4, 6], [0, 1, 1]]).rank()


def test_scalars():
    F = Field(7)
    assert F.scalar("3/2") == 5  # 2 * 5 = 10 = 3 mod 7
    assert F.scalar(-1) == 6
    assert Field(0).scalar("-3/4") == Fraction(-3, 4)
    with pytest.raises(ZeroDivisionError):
        F.scalar("1/7")
    with pytest.raises(ValueError):
        Field(9)


@pytest.mark.parametrize("p,n", [(7, 3), (7, 6), (17, 4), (13, 12)])
def test_root_of_unity_is_primitive(p, n):
    z = Field(p).root_of_unity(n)
    assert pow(z, n, p) == 1
    assert all(pow(z, k, p) != 1 for k in range(1, n))


def test_root_of_unity_missing():
    with pytest.raises(NonSplitField):
        Field(5).root_of_unity(3)


def test_choose_prime():
    assert choose_prime(2, 4) == 17
    assert choose_prime(3, 9) == 37
    assert choose_prime(1, 1) == 5
