from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from banalg.errors import DescriptorMismatch, ParseError, TruncationError, UnsupportedCase
from banalg.scalars import BanachRingDescriptor
from banalg.series import (
    Dagger,
    Disc,
    FormalPS,
    MultiSeries,
    Polynomial,
    Stein,
    Tate,
    diagonal_restrict,
    fine_norm,
    flavor_norm,
    monomials,
    parse_flavor,
    parse_series,
    tensor_embed_left,
    tensor_embed_right,
)

Z = BanachRingDescriptor.integer()
Q = BanachRingDescriptor.rational()
Q2 = BanachRingDescriptor.padic(2)
N = 6


def S(text, nvars=1, order=N, ring=Z, names=None):
    return parse_series(text, ring, nvars, order, names)


def series_strategy(nvars, order=N, ring=Z, lo=-20, hi=20):
    exps = st.sampled_from(monomials(nvars, order))
    return st.dictionaries(exps, st.integers(lo, hi), max_size=8).map(lambda d: MultiSeries(ring, nvars, order, d))


# -- norms ---------------------------------------------------------------------
@pytest.mark.parametrize("text, fl, expected", [
    ("2*x + x^2", Disc((1,)), 3),
    ("2*x + x^2", Tate((1,)), 2),
    ("2*x + x^2", Polynomial(), 3),
    ("2*x + x^2", Disc((Fraction(1, 2),)), Fraction(5, 4)),
    ("2*x + x^2", Dagger((1,)), 8),  # disc norm at the default representative rho = 2
    ("2*x + 3*x^2", FormalPS({(2,): 3}, 1), 2),
])
def test_flavor_norm_examples(text, fl, expected):
    assert flavor_norm(S(text), fl) == expected


@pytest.mark.parametrize("n", [2, 3, 5, 6])
def test_disc_norm_of_power_difference(n):
    f = S(f"x^{n} - y^{n}", 2)
    assert flavor_norm(f, Disc((1, 1))) == 2


def test_fine_norm_reports_degree():
    assert fine_norm(S("3 - x^4")) == (4, 4)


def test_stein_norm_is_weighted_max_over_radii():
    fl = Stein((1,), ((Fraction(1, 2),), (Fraction(3, 4),)), {(0,): 1, (1,): 2})
    f = S("1 + x")
    # radius 1/2 gives 3/2 with weight 1; radius 3/4 gives 7/4 with weight 2
    assert flavor_norm(f, fl) == Fraction(3, 2)


def test_flavor_norm_variable_mismatch():
    with pytest.raises(DescriptorMismatch):
        flavor_norm(S("x"), Disc((1, 1)))


@pytest.mark.parametrize("bad", [
    lambda: Disc((0,)),
    lambda: Tate((-1,)),
    lambda: Dagger((1,), (1,)),
    lambda: FormalPS({(1,): 0}),
    lambda: Stein((1,), ((Fraction(1, 2),), (Fraction(1, 4),))),
    lambda: Stein((1,), ()),
])
def test_flavor_invariants(bad):
    with pytest.raises(ValueError):
        bad()


# -- arithmetic ----------------------------------------------------------------------
def test_arithmetic_examples():
    y, z = S("y", 2, names=("y", "z")), S("z", 2, names=("y", "z"))
    assert (y - z) * (y + z) == S("y^2 - z^2", 2, names=("y", "z"))
    x1 = S("x", 1, 1)
    assert (x1 * x1).is_zero()
    assert S("1 + x", order=3) * S("1 - x", order=3) == S("1 - x^2", order=3)


def test_shape_mismatch():
    with pytest.raises(DescriptorMismatch):
        S("x", order=3) + S("x", order=4)
    with pytest.raises(DescriptorMismatch):
        S("x") + S("x", ring=Q)


@given(series_strategy(2), series_strategy(2), series_strategy(2))
def test_mul_commutative_associative(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


# -- embeddings ---------------------------------------------------------------------
def test_embedding_examples():
    x = S("x")
    assert tensor_embed_left(x) == S("y", 2, names=("y", "z"))
    assert tensor_embed_right(x) == S("z", 2, names=("y", "z"))
    assert tensor_embed_left(S("x^2 + 1")) == S("y^2 + 1", 2, names=("y", "z"))


@pytest.mark.parametrize("text, expected", [("y - z", "0"), ("y*z", "x^2"), ("y^2*z", "x^3")])
def test_diagonal_restrict_examples(text, expected):
    assert diagonal_restrict(S(text, 2, names=("y", "z"))) == S(expected)


def test_diagonal_restrict_odd():
    with pytest.raises(DescriptorMismatch):
        diagonal_restrict(S("x", 3))


@given(series_strategy(1))
def test_section_identity(f):
    assert diagonal_restrict(tensor_embed_left(f)) == f
    assert diagonal_restrict(tensor_embed_right(f)) == f


@given(series_strategy(1), series_strategy(1))
def test_embeddings_are_ring_maps(f, g):
    for e in (tensor_embed_left, tensor_embed_right):
        assert e(f * g) == e(f) * e(g)
        assert e(f + g) == e(f) + e(g)
    F, G = tensor_embed_left(f), tensor_embed_right(g)
    assert diagonal_restrict(F * G) == f * g


# -- norm properties -------------------------------------------------------------------
flavors_2 = [Disc((1, 1)), Disc((Fraction(1, 2), 2)), Tate((1, 1)), Tate((3, Fraction(1, 3))), FormalPS({(1, 1): 3}, 2)]


@pytest.mark.parametrize("fl", flavors_2, ids=lambda f: f.literal())
@given(f=series_strategy(2), g=series_strategy(2))
def test_archimedean_triangle(fl, f, g):
    assert flavor_norm(f + g, fl) <= flavor_norm(f, fl) + flavor_norm(g, fl)


@pytest.mark.parametrize("fl", [Tate((1, 1)), Tate((2, Fraction(1, 2))), FormalPS({(2, 0): 5}, 2)], ids=lambda f: f.literal())
@given(f=series_strategy(2), g=series_strategy(2))
def test_ultrametric_for_sup_flavors(fl, f, g):
    f, g = f.change_ring(Q2), g.change_ring(Q2)
    assert flavor_norm(f + g, fl) <= max(flavor_norm(f, fl), flavor_norm(g, fl))


@pytest.mark.parametrize("radii", [(1, 1), (Fraction(1, 2), 3)])
@given(f=series_strategy(2), g=series_strategy(2))
def test_disc_submultiplicative(radii, f, g):
    fl = Disc(radii)
    assert flavor_norm(f * g, fl) <= flavor_norm(f, fl) * flavor_norm(g, fl)


@given(f=series_strategy(2, order=12), g=series_strategy(2, order=12))
def test_tate_multiplicative_over_q2(f, g):
    assume(f.degree() + g.degree() <= 12)
    f, g = f.change_ring(Q2), g.change_ring(Q2)
    fl = Tate((1, 1))
    assert flavor_norm(f * g, fl) == flavor_norm(f, fl) * flavor_norm(g, fl)


@given(series_strategy(1), st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=10),
       st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=10))
def test_dagger_dominates_tate(f, r, extra):
    rho = r + extra
    for J, a in f.coeffs.items():
        assert abs(a) * rho ** J[0] >= abs(a) * r ** J[0]
    assert flavor_norm(f, Dagger((r,), (rho,))) >= flavor_norm(f, Tate((r,)))


# -- parsing --------------------------------------------------------------------------
@pytest.mark.parametrize("text, coeffs", [
    ("2*x^2 - 1/3*x*y + 5", {(2, 0): 2, (1, 1): Fraction(-1, 3), (0, 0): 5}),
    ("-x1 + x2^3", {(1, 0): -1, (0, 3): 1}),
    ("x*y - y*x", {}),
    ("-y^2", {(0, 2): -1}),
])
def test_parse_series(text, coeffs):
    assert parse_series(text, Q, 2, N) == MultiSeries(Q, 2, N, coeffs)


@pytest.mark.parametrize("text, token, pos", [
    ("2*x + w", "w", 6),
    ("x^^2", "^", 2),
    ("3 +", "+", 2),
])
def test_parse_series_errors(text, token, pos):
    with pytest.raises(ParseError) as e:
        parse_series(text, Q, 2, N)
    assert e.value.token == token
    assert e.value.position == pos


def test_parse_series_truncation():
    with pytest.raises(TruncationError):
        parse_series("x^7", Q, 1, N)


@pytest.mark.parametrize("text, fl", [
    ("poly", Polynomial()),
    ("disc(1,1/2)", Disc((1, Fraction(1, 2)))),
    ("tate:1", Tate((1,))),
    ("tate", Tate((1,))),
    ("dagger(1;3/2)", Dagger((1,), (Fraction(3, 2),))),
    ("dagger:1:2", Dagger((1,), (2,))),
    ("formal(1.0=2,0.1=3)", FormalPS({(1, 0): 2, (0, 1): 3})),
    ("stein(1;1/2<3/4;0=1,1=2)", Stein((1,), ((Fraction(1, 2),), (Fraction(3, 4),)), {(0,): 1, (1,): 2})),
])
def test_parse_flavor(text, fl):
    assert parse_flavor(text) == fl
    assert parse_flavor(fl.literal()) == fl


@pytest.mark.parametrize("text", ["cube(1)", "tate(1", "dagger(1;1/2)", "disc(a)"])
def test_parse_flavor_errors(text):
    with pytest.raises(ParseError):
        parse_flavor(text)


def test_substitute_from_zero_variables():
    c = MultiSeries.constant(Z, 0, N, 3)
    with pytest.raises(UnsupportedCase):
        c.substitute([])
