from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from banalg.division import (
    BoundCertificate,
    certify_formal_weight_transform,
    certify_poly_bound,
    certify_stein,
    certify_tate_coefficientwise,
    coefficientwise_violations,
    diag_divide,
    disc_counterexample,
    division_operator_norm,
    phi_weight,
    uniform_division_bound,
    y_minus_z,
)
from banalg.errors import DiagonalError, TruncationError
from banalg.sampling import random_diagonal_vanishing, random_psi, trial_rng
from banalg.scalars import BanachRingDescriptor
from banalg.series import (
    Disc,
    FormalPS,
    MultiSeries,
    Stein,
    Tate,
    broadcast,
    flavor_norm,
    parse_series,
    tensor_embed_left,
    tensor_embed_right,
)
from oracles import divide_by_diagonal

Z = BanachRingDescriptor.integer()
Q = BanachRingDescriptor.rational()
Q2 = BanachRingDescriptor.padic(2)
N = 10


def YZ(text, ring=Z, order=N):
    return parse_series(text, ring, 2, order, ("y", "z"))


@st.composite
def diagonal_vanishing(draw, max_degree=10, bound=99):
    seed = draw(st.integers(0, 2**32))
    return random_diagonal_vanishing(trial_rng(seed, 0), max_degree, bound=bound)


# -- diag_divide -----------------------------------------------------------------
@pytest.mark.parametrize("f, g", [
    ("y^2 - z^2", "y + z"),
    ("y - z", "1"),
    ("y^2*z - y*z^2", "y*z"),
])
def test_diag_divide_examples(f, g):
    assert diag_divide(YZ(f)) == YZ(g)


def test_diag_divide_matches_sympy_on_examples():
    f = YZ("y^2*z - y*z^2")
    assert diag_divide(f).coeffs == divide_by_diagonal(f.coeffs) == {(1, 1): 1}


def test_diag_divide_rejects_non_vanishing():
    with pytest.raises(DiagonalError):
        diag_divide(YZ("y + z"))


@given(diagonal_vanishing())
def test_diag_divide_exact_reconstruction(f):
    g = diag_divide(f)
    assert y_minus_z(Z, f.order) * g == f
    assert {J: Fraction(a) for J, a in g.coeffs.items()} == divide_by_diagonal(f.coeffs)


@given(diagonal_vanishing())
def test_coefficient_formula(f):
    g = diag_divide(f)
    for k in range(N):
        for l in range(N - k):
            assert g[(k, l)] == sum(f[(k + 1 + t, l - t)] for t in range(l + 1))


@given(st.dictionaries(st.tuples(st.integers(0, 6)), st.integers(-50, 50), max_size=6))
def test_section_identity(coeffs):
    # f(y) - f(z) divided by (y - z) reconstructs the difference
    f = MultiSeries(Z, 1, 7, coeffs)
    d = tensor_embed_left(f) - tensor_embed_right(f)
    assert y_minus_z(Z, 7) * diag_divide(d) == d


# -- polynomial bound ---------------------------------------------------------------
@pytest.mark.parametrize("f, nin, nout, bound", [("y^2 - z^2", 2, 2, 8), ("y - z", 2, 1, 1)])
def test_poly_bound_examples(f, nin, nout, bound):
    c = certify_poly_bound(YZ(f))
    assert (c.input_norm, c.output_norm, c.bound_constant, c.passed) == (nin, nout, bound, True)
    assert c.bound_kind == "PolyCubed"


def test_poly_bound_campaign_small_coefficients():
    for i in range(1000):
        f = random_diagonal_vanishing(trial_rng(0, i), 10, bound=9)
        assert certify_poly_bound(f).passed


@given(diagonal_vanishing())
def test_poly_bound_property(f):
    c = certify_poly_bound(f)
    assert c.passed and c.output_norm <= c.bound_constant * c.input_norm


# -- Tate ------------------------------------------------------------------------------
def test_tate_examples():
    c = certify_tate_coefficientwise(YZ("y - z"))
    assert c.output_norm == 1 and c.passed
    c = certify_tate_coefficientwise(YZ("y^2 - z^2"))
    assert c.details["argmax"] == [0, 1]
    assert (c.output_norm, c.bound_constant, c.passed) == (1, 2, True)


@given(diagonal_vanishing())
def test_tate_coefficientwise_property(f):
    assert coefficientwise_violations(f, diag_divide(f)) == []
    assert certify_tate_coefficientwise(f).passed


@given(diagonal_vanishing())
def test_tate_ultrametric_over_q2(f):
    f2 = f.change_ring(Q2)
    c = certify_tate_coefficientwise(f2)
    assert c.details["ultrametric_pass"] and c.output_norm <= c.input_norm


@given(diagonal_vanishing(max_degree=6),
       st.sampled_from([(1, 1), (Fraction(1, 2), Fraction(1, 2)), (2, 3), (Fraction(1, 3), 2)]))
def test_tate_other_radii(f, radii):
    assert certify_tate_coefficientwise(f.change_ring(Q2), Tate(radii)).passed


# -- formal weight transform -----------------------------------------------------------
def test_formal_examples():
    c = certify_formal_weight_transform(YZ("y - z"))
    assert phi_weight(FormalPS((), 2), 0, 0) == 1
    assert (c.input_norm, c.passed) == (1, True)
    psi = FormalPS.from_function(lambda i, j: i + j + 1, 2, N)
    c = certify_formal_weight_transform(YZ("y^2 - z^2"), psi)
    # oracle: C = 1/3; g = y + z with phi(1,0) = 3, phi(0,1) = 2*3*3 = 18
    assert (c.input_norm, c.output_norm, c.passed) == (Fraction(1, 3), Fraction(1, 3), True)
    assert phi_weight(psi, 0, 1) == 18


def test_formal_weight_table_rejects_zero():
    with pytest.raises(ValueError):
        FormalPS({(0, 1): 0})


@given(st.integers(0, 2**32))
def test_formal_weight_property(seed):
    rng = trial_rng(seed, 0)
    f = random_diagonal_vanishing(rng)
    assert certify_formal_weight_transform(f, random_psi(rng)).passed


# -- disc counterexample ------------------------------------------------------------------
@pytest.mark.parametrize("n", range(2, 9))
def test_disc_counterexample(n):
    c = disc_counterexample(n)
    assert (c.input_norm, c.output_norm) == (2, n)
    assert c.ratio == Fraction(n, 2)
    assert c.passed is False and c.bound_kind == "DiscCounterexample"


def test_disc_counterexample_guard():
    with pytest.raises(TruncationError):
        disc_counterexample(9, order=8)


# -- Stein chains ---------------------------------------------------------------------------
def _oracle_operator_norm(src, tgt, order):
    best = Fraction(0)
    for i in range(order + 1):
        for j in range(order + 1 - i):
            g = divide_by_diagonal({(i, j): 1})
            out = sum(abs(c) * Fraction(tgt[0]) ** a * Fraction(tgt[1]) ** b for (a, b), c in g.items())
            best = max(best, out / (Fraction(src[0]) ** i * Fraction(src[1]) ** j))
    return best


@pytest.mark.parametrize("src, tgt", [
    ((Fraction(3, 4), Fraction(3, 4)), (Fraction(1, 2), Fraction(1, 2))),
    ((1, Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 4))),
    ((2, 2), (1, 1)),
])
def test_division_operator_norm_matches_oracle(src, tgt):
    assert division_operator_norm(src, tgt, 8) == _oracle_operator_norm(src, tgt, 8)


def test_uniform_division_bound():
    assert uniform_division_bound(Fraction(1), Fraction(1)) is None
    # sup_i i (1/2)^{i-1} = 1 at i = 1, 2
    assert uniform_division_bound(Fraction(1), Fraction(1, 2)) == 1
    assert uniform_division_bound(2, 1) == Fraction(1, 2)


STEIN = Stein((1,), ((Fraction(1, 2),), (Fraction(3, 4),), (Fraction(7, 8),)))


@given(diagonal_vanishing(max_degree=8))
def test_stein_certificate_property(f):
    c = certify_stein(f, STEIN)
    assert c.passed and c.bound_kind == "SteinChain"
    assert c.input_norm == flavor_norm(f, broadcast(STEIN, 2))


def test_certificate_to_dict():
    d = certify_poly_bound(YZ("y - z")).to_dict()
    assert d["pass"] is True and d["input_norm"] == "2" and d["flavor"] == "poly"
    with pytest.raises(ValueError):
        BoundCertificate(Disc((1,)), 1, 1, 1, "Other", True)
