import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hacalc.errors import PreconditionError
from hacalc.linalg import (Echelon, SparseMatrix, ZpLattice, cokernel_presentation,
                           from_matrix_market, kernel_basis, padic_rank, rank, rank_report,
                           smith_normal_form, to_matrix_market)
from hacalc.padic import PadicConfig, PadicScalar

Z = "ZZ"


def M(rows, ring=Z):
    return SparseMatrix.from_dense(rows, ring)


def test_smith_examples():
    assert smith_normal_form(M([[1]])).diagonal == [1]
    assert smith_normal_form(M([[2, 0], [0, 3]])).diagonal == [1, 6]
    assert smith_normal_form(M([[0]])).diagonal == [0]


def test_smith_transforms():
    A = M([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    S = smith_normal_form(A)
    assert S.diagonal == [2, 6, 12]
    D = S.U @ A @ S.V
    assert D.to_dense() == [[2, 0, 0], [0, 6, 0], [0, 0, 12]]


def test_padic_rank_examples():
    cfg = PadicConfig(3, 10)
    I = SparseMatrix.identity(4, cfg)
    rep = padic_rank(I, 1)
    assert rep.rank == 4 and not rep.precision_limited
    # p^N at precision N is indistinguishable from zero
    tiny = SparseMatrix(1, 1, {(0, 0): PadicScalar.from_parts(cfg, 10, 1, 10)}, cfg)
    rep = padic_rank(tiny, 5)
    assert rep.rank == 0 and rep.precision_limited
    rep = rank_report(M([[1, 1], [1, 1]], "QQ"))
    assert rep.rank == 1 and rep.kernel_dim == 1


def test_tolerance_above_precision_rejected():
    cfg = PadicConfig(3, 10)
    with pytest.raises(PreconditionError):
        padic_rank(SparseMatrix.identity(2, cfg), 11)


def test_kernel_and_cokernel():
    assert len(kernel_basis(M([[0]]))) == 1
    rep = cokernel_presentation(M([[0]]))
    assert rep.kernel_dim == 1 and rep.cokernel_dim == 1


def test_kernel_of_known_rank_product():
    rng = random.Random(3)
    A = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(5)]
    B = [[rng.randint(-4, 4) for _ in range(7)] for _ in range(3)]
    P = M(A, "QQ") @ M(B, "QQ")
    assert rank(P) == 3
    ker = kernel_basis(P)
    assert len(ker) == 4
    for v in ker:
        assert not P.apply(v)


def test_echelon_complement_is_smallest_columns():
    e = Echelon(3)
    assert e.add({0: 1, 2: 1})
    assert not e.add({0: 2, 2: 2})
    assert e.add({1: 1, 2: 3})
    # both pivots sit on the larger columns; column 0 represents the quotient
    assert e.complement() == [0]
    comp, Q = e.quotient_matrix("QQ")
    assert comp == [0] and Q.to_dense() == [[1, 3, -1]]
    for v in ({0: 1, 2: 1}, {1: 1, 2: 3}):
        assert not Q.apply(v)


def test_zp_lattice():
    L = ZpLattice(2)
    L.add({0: Fraction(1, 2)})
    L.add({1: 4})
    assert L.contains({0: 3, 1: 8})
    assert not L.contains({1: 2})
    assert L.rank() == 2


def test_matrix_market_round_trip():
    A = M([[1, 0, -2], [0, 5, 0]])
    assert from_matrix_market(to_matrix_market(A), Z).to_dense() == A.to_dense()


small = st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=1, max_size=4)


@settings(max_examples=60, deadline=None)
@given(small)
def test_rank_nullity(rows):
    A = M(rows, "QQ")
    r = rank(A)
    assert r + len(kernel_basis(A)) == A.cols
    assert r == rank(A.transpose())


@settings(max_examples=60, deadline=None)
@given(small)
def test_smith_diagonal_divisibility(rows):
    S = smith_normal_form(M(rows))
    d = [x for x in S.diagonal if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert len(d) == rank(M(rows, "QQ"))
