import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from banalg.complexes import (
    AlgebraMap,
    TruncatedAlgebra,
    check_augmentation,
    complex_from_matrices,
    diagonal_koszul,
    koszul,
    tensor_over,
)
from banalg.errors import DescriptorMismatch, PrecisionError, TruncationError
from banalg.hochschild import FiniteAlgebra, hh_bar
from banalg.linalg import SparseMatrix, invariant_factors, rank, torsion
from banalg.scalars import BanachRingDescriptor, PAdic
from banalg.series import Dagger, FormalPS, MultiSeries, Polynomial, Tate, monomials
from oracles import dense_rank

Z = BanachRingDescriptor.integer()
Q = BanachRingDescriptor.rational()
Q2 = BanachRingDescriptor.padic(2)


def H(K, stable=False):
    rep = K.homology()
    return rep.stable if stable else rep.ranks


# -- Koszul complexes -------------------------------------------------------------------
def test_koszul_regular_element():
    A = TruncatedAlgebra(Q, 1, 6)
    assert H(koszul(A, [A.var(0)])) == {-1: 0, 0: 1}


def test_koszul_two_coordinates():
    A = TruncatedAlgebra(Q, 2, 6)
    K = koszul(A, [A.var(0), A.var(1)])
    assert K.check_d_squared()
    assert H(K) == {-2: 0, -1: 0, 0: 1}


def test_koszul_zero_element():
    A = TruncatedAlgebra(Q, 1, 6)
    assert H(koszul(A, [A.zero()])) == {-1: 7, 0: 7}


def test_koszul_degree_overflow():
    A = TruncatedAlgebra(Q, 1, 3)
    with pytest.raises(TruncationError):
        koszul(A, [A.series("x^4")])
    with pytest.raises(DescriptorMismatch):
        koszul(A, [MultiSeries(Q, 1, 4, {(4,): 1})])


def test_koszul_shape():
    A = TruncatedAlgebra(Q, 3, 2)
    K = koszul(A, [A.var(0), A.var(1), A.var(2)])
    assert {d: len(g) for d, g in K.gens.items()} == {-3: 1, -2: 3, -1: 3, 0: 1}


poly_elements = st.lists(
    st.dictionaries(st.sampled_from(monomials(2, 3)), st.integers(-5, 5), max_size=4), min_size=1, max_size=3
)


@given(poly_elements)
def test_koszul_d_squared(elems):
    A = TruncatedAlgebra(Q, 2, 5)
    K = koszul(A, [MultiSeries(Q, 2, 5, e) for e in elems])
    assert K.check_d_squared()


@pytest.mark.parametrize("n, k", [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)])
def test_koszul_regular_sequence_concentrated(n, k):
    A = TruncatedAlgebra(Q, n, 5)
    K = koszul(A, [A.var(i) for i in range(k)])
    rep = K.homology()
    assert rep.concentrated_in_zero()
    # quotient Q[x_{k+1}..x_n] on the stable band
    assert rep.stable[0] == TruncatedAlgebra(Q, n - k, 5).stable_rank(rep.band)


# -- diagonal Koszul -------------------------------------------------------------------------
@pytest.mark.parametrize("ring, flavor", [
    (Q, Polynomial()),
    (Q2, Tate((1,))),
    (Q, FormalPS()),
    (Q, Dagger((1,))),
    (Z, Polynomial()),
])
def test_diagonal_koszul_exact(ring, flavor):
    C = TruncatedAlgebra(ring, 1, 4, flavor)
    K = diagonal_koszul(C)
    rep = K.homology()
    assert K.check_d_squared()
    assert rep.stable == {-1: 0, 0: C.stable_rank(rep.band)}
    assert check_augmentation(K)


# -- tensor_over ------------------------------------------------------------------------------
def _matrices(K):
    _, mats = K.realize()
    return {i: m.to_dense() for i, m in mats.items()}


def test_tensor_over_identity():
    A = TruncatedAlgebra(Q, 2, 4)
    K = koszul(A, [A.series("x^2 - y"), A.series("x*y")])
    assert _matrices(tensor_over(K, AlgebraMap.identity(A))) == _matrices(K)


def test_tensor_over_evaluation_at_zero():
    A = TruncatedAlgebra(Q, 1, 6)
    pt = TruncatedAlgebra(Q, 0, 6)
    X = tensor_over(koszul(A, [A.var(0)]), AlgebraMap(A, pt, (pt.zero(),)))
    assert X.dims() == {-1: 1, 0: 1}
    assert _matrices(X)[-1] == [[0]]


def test_tensor_over_analytification():
    P, T = TruncatedAlgebra(Q2, 1, 4), TruncatedAlgebra(Q2, 1, 4, Tate((1,)))
    phi = AlgebraMap.canonical(P, T)
    pushed = tensor_over(diagonal_koszul(P), phi, phi)
    assert _matrices(pushed) == _matrices(diagonal_koszul(T))


# -- homology ---------------------------------------------------------------------------------
def test_identity_complex_is_acyclic():
    X = complex_from_matrices(Q, {-1: {(0, 0): 1}}, {-1: 1, 0: 1})
    assert H(X) == {-1: 0, 0: 0}


def test_integer_torsion():
    X = complex_from_matrices(Z, {-1: {(0, 0): 2}}, {-1: 1, 0: 1})
    rep = X.homology()
    assert rep.ranks == {-1: 0, 0: 0}
    assert rep.torsion[0] == [2]


def test_bar_complex_of_dual_numbers():
    assert hh_bar(FiniteAlgebra.quotient(1, ["x^2"]), 4).ranks == [2, 1, 1, 1, 1]


def test_formal_integer_torsion():
    # Z[[y]]/(y - 2) on the truncation: Z/2^{N+1}
    A = TruncatedAlgebra(Z, 1, 8, FormalPS())
    rep = koszul(A, [A.series("x - 2")]).homology()
    assert rep.torsion[0] == [2**9]


@given(st.integers(0, 2**32))
def test_rank_invariant_under_permutation(seed):
    rng = random.Random(seed)
    A = TruncatedAlgebra(Q, 2, 4)
    K = koszul(A, [A.series("x^2 - y"), A.series("x + y^2")])
    _, mats = K.realize()
    for M in mats.values():
        rp = list(range(M.nrows))
        cp = list(range(M.ncols))
        rng.shuffle(rp)
        rng.shuffle(cp)
        assert rank(M.permuted(rp, cp), Q) == rank(M, Q)


# -- linear algebra against the hand-rolled oracle ---------------------------------------------------
matrices = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)))


def _sparse(rows):
    M = SparseMatrix(len(rows), len(rows[0]))
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            M.set(i, j, v)
    return M


@given(matrices)
def test_rank_rational_matches_oracle(rows):
    assert rank(_sparse(rows), Q) == dense_rank(rows)


@given(matrices)
def test_rank_padic_matches_rational(rows):
    assert rank(_sparse(rows), BanachRingDescriptor.padic(2, 20)) == dense_rank(rows)


def test_rank_padic_negative_valuation_is_exact():
    h = Fraction(1, 2)
    assert rank(_sparse([[h, h], [h, h]]), Q2) == 1


def test_rank_padic_precision_exhausted():
    a = PAdic.from_rational(2, 3, 4)
    b = PAdic.from_rational(2, 19, 4)
    M = SparseMatrix(2, 2, {0: {0: a, 1: a}, 1: {0: a, 1: b}})
    with pytest.raises(PrecisionError):
        rank(M, Q2)


@pytest.mark.parametrize("rows, factors", [
    ([[2, 0], [0, 6]], [2, 6]),
    ([[2, 4], [6, 8]], [2, 4]),
    ([[0, 0], [0, 0]], []),
    ([[1, 2, 3], [4, 5, 6]], [1, 3]),
])
def test_invariant_factors(rows, factors):
    assert invariant_factors(_sparse(rows)) == factors
    assert torsion(_sparse(rows)) == [f for f in factors if f > 1]
