import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from monocubic.forms import (
    BinaryCubicForm,
    CubicRing,
    UnimodularAction,
    act,
    canonicalize,
    canonicalize_with_transform,
    disc,
    equivalent,
    field_discriminant,
    hessian,
    index_form_of_field,
    index_form_of_ring,
    is_maximal,
    is_maximal_at_p,
    jacobian_covariant,
    maximalize,
    nonmaximal_primes,
    ring_from_form,
    splitting_type,
    substitute,
)
from monocubic.numth import discriminant_of_polynomial, poly
from oracles import dedekind_maximal

coef = st.integers(-40, 40)
forms = st.builds(BinaryCubicForm, coef, coef, coef, coef)


@st.composite
def gl2(draw, twisted=False):
    # products of elementary matrices stay in GL2(Z)
    g = UnimodularAction(1, 0, 0, 1, twisted)
    for _ in range(draw(st.integers(0, 5))):
        k = draw(st.integers(-3, 3))
        e = draw(st.sampled_from([(1, k, 0, 1), (1, 0, k, 1), (0, 1, 1, 0), (-1, 0, 0, 1)]))
        g = g @ UnimodularAction(*e, twisted)
    return g


def test_parse_and_str_roundtrip():
    f = BinaryCubicForm.parse("5, 0,0,-7")
    assert f == BinaryCubicForm(5, 0, 0, -7) and str(f) == "5,0,0,-7"
    with pytest.raises(ValueError):
        BinaryCubicForm.parse("1,2,3")


def test_disc_examples():
    assert disc(BinaryCubicForm(1, 0, -1, -1)) == -23
    assert disc(BinaryCubicForm(5, 0, 0, -7)) == -33075
    assert disc(BinaryCubicForm(1, -1, -2, -8)) == -2012


@given(forms)
def test_disc_matches_polynomial_disc(f):
    assume(f.a != 0)
    assert disc(f) == discriminant_of_polynomial(poly([f.d, f.c, f.b, f.a]))


@given(forms, gl2(), gl2())
def test_action_is_a_right_action_and_preserves_disc(f, g, h):
    assert disc(act(g, f)) == disc(f)
    assert act(h, act(g, f)) == act(h @ g, f)
    assert act(g.inverse(), act(g, f)) == f


def test_twisted_action_negates_on_det_minus_one():
    f = BinaryCubicForm(1, 2, 3, 4)
    swap = UnimodularAction(0, 1, 1, 0)
    assert act(UnimodularAction(0, 1, 1, 0, twisted=True), f) == -act(swap, f)
    with pytest.raises(ValueError):
        UnimodularAction(2, 0, 0, 1)


@settings(max_examples=300)
@given(forms)
def test_syzygy(f):
    h = hessian(f)
    g = jacobian_covariant(f)
    for x, y in ((1, 0), (0, 1), (2, -3), (5, 7)):
        assert g(x, y) ** 2 + 4 * h(x, y) ** 3 + 27 * disc(f) * f(x, y) ** 2 == 0


def test_covariant_examples():
    f = BinaryCubicForm(1, 0, 0, 5)
    h = hessian(f)
    assert (h.A, h.B, h.C) == (0, 45, 0)
    assert jacobian_covariant(f).coeffs == (135, 0, 0, -675)


@given(forms, gl2())
def test_covariance_of_hessian(f, g):
    # h(f o g) = h(f) o g for det g = +-1
    (p, q), (r, s) = g.matrix
    h1 = hessian(act(g, f))
    h0 = hessian(f)
    for x, y in ((1, 0), (0, 1), (1, 1)):
        assert h1(x, y) == h0(p * x + r * y, q * x + s * y)


@settings(max_examples=200)
@given(forms, gl2())
def test_canonical_form_is_orbit_invariant(f, g):
    assume(disc(f) != 0 and f.is_irreducible())
    c, w = canonicalize_with_transform(f)
    assert act(w, f) == c
    assert canonicalize(act(g, f)) == c
    assert canonicalize(c) == c
    wit = equivalent(f, act(g, f))
    assert wit is not None and act(wit, f) == act(g, f)


def test_equivalence_examples():
    assert equivalent(BinaryCubicForm(5, 0, 0, -7), BinaryCubicForm(1, 0, 0, -21)) is None
    assert index_form_of_field(poly([-175, 0, 0, 1])) == BinaryCubicForm(5, -15, 15, -12)


@settings(max_examples=150)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-60, 60))
def test_maximality_matches_dedekind(b, c, d):
    g = poly([d, c, b, 1])
    f = BinaryCubicForm(1, b, c, d)
    assume(disc(f) != 0)
    for p in (2, 3, 5, 7):
        assert is_maximal_at_p(f, p) == dedekind_maximal(g, p), (f, p)


def test_maximalize_and_field_discriminant():
    # x^3 - x^2 - 2x - 8: polynomial disc -2012 = -4 * 503, field disc -503
    g = poly([-8, -2, -1, 1])
    assert field_discriminant(g) == -503
    f = index_form_of_field(g)
    assert is_maximal(f) and disc(f) == -503
    assert nonmaximal_primes(BinaryCubicForm(1, -1, -2, -8)) == [2]
    assert maximalize(BinaryCubicForm(1, 0, 0, -8 * 3)) .a != 0
    with pytest.raises(ValueError):
        index_form_of_field(poly([-1, 0, 0, 1]))


def test_splitting_types():
    assert splitting_type(index_form_of_field(poly([-8, -2, -1, 1])), 2).symbol == "(111)"
    assert splitting_type(BinaryCubicForm(1, 0, -1, -1), 2).symbol == "(3)"
    assert splitting_type(BinaryCubicForm(1, 0, -1, -1), 23).symbol == "(1^21)"
    s = splitting_type(BinaryCubicForm(1, 0, -3, -1), 3)
    assert (s.symbol, s.v3, s.galois) == ("(1^3)", 4, "C3")
    assert splitting_type(BinaryCubicForm(1, 0, -1, -1), 5).symbol == "(12)"
    with pytest.raises(ValueError):
        splitting_type(BinaryCubicForm(1, 0, 0, -8 * 8), 2)


def test_splitting_symbols_follow_factorization_counts():
    # among fields of small discriminant every (111)/(12)/(3) symbol appears
    seen = {splitting_type(f, 5).symbol for f in
            [BinaryCubicForm(1, 0, -1, -1), BinaryCubicForm(1, -1, -2, 1), BinaryCubicForm(1, 1, -2, -1),
             BinaryCubicForm(1, 0, -2, -2), BinaryCubicForm(1, 0, 1, -1)]}
    assert seen <= {"(111)", "(12)", "(3)", "(1^21)", "(1^3)"}


@settings(max_examples=200)
@given(forms)
def test_delone_faddeev_roundtrip(f):
    assume(disc(f) != 0)
    R = ring_from_form(f)
    assert R.is_associative()
    assert R.discriminant() == disc(f)
    assert index_form_of_ring(R) == f


def test_ring_basics():
    R = ring_from_form(BinaryCubicForm(1, 0, -1, -1))
    assert R.mul((1, 0, 0), (3, 4, 5)) == (3, 4, 5)
    assert R.trace((1, 0, 0)) == 3
    # a generator of Z[x]/(x^3 - x - 1): its min poly has discriminant -23
    u = (0, 0, 1)
    cp = R.char_poly(u)
    assert abs(R.index_of(u)) == 1
    assert discriminant_of_polynomial(poly(cp)) == -23
    assert R.idempotents() == [(0, 0, 0), (1, 0, 0)]
    assert isinstance(R, CubicRing)


def test_substitute_non_unimodular():
    f = BinaryCubicForm(1, 0, 0, 1)
    assert substitute(f, ((2, 0), (0, 1))).coeffs == (8, 0, 0, 1)


def test_kernel_and_exact_paths_agree_on_large_coefficients():
    rng = np.random.default_rng(3)
    for _ in range(20):
        f = BinaryCubicForm(*(int(v) for v in rng.integers(-(2**40), 2**40, 4)))
        if disc(f) == 0 or not f.is_irreducible():
            continue
        c = canonicalize(f)
        assert disc(c) == disc(f) and canonicalize(c) == c
