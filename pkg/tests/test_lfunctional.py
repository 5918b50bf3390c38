from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mathieu_lab.errors import RingMismatch, TermBudgetExceeded
from mathieu_lab.lfunctional import L, L_power_profile, pairing, random_poly
from mathieu_lab.poly import GF, SparsePoly, U, XiZ, Z, convert_space, parse_poly

from oracles import L_oracle
from test_poly import polys


def P(text, n=2):
    return parse_poly(text, U(n))


def test_L_examples():
    assert L(P("U1^2*U2^3")) == 12
    assert L(P("1")) == 1
    assert L(P("U1 - U2")) == 0
    assert L(P("1/2*U1^3")) == 3
    assert L(P("1/4*U1")) == Fraction(1, 4)


def test_L_rejects_other_rings():
    with pytest.raises(RingMismatch):
        L(parse_poly("U1", U(1), GF(3)))
    with pytest.raises(RingMismatch):
        L(parse_poly("x1*z1", XiZ(1)))


def test_profile_examples():
    rep = L_power_profile(P("2*U1 - U1^2", 1), 2)
    assert rep.values == [0, 8]
    assert rep.first_nonzero_m == 2
    rep = L_power_profile(SparsePoly.zero(U(1)), 4)
    assert rep.values == [0, 0, 0, 0]
    assert rep.first_nonzero_m is None
    assert rep.m1_depth == 4
    rep = L_power_profile(P("U1", 1), 1)
    assert rep.values == [1] and rep.first_nonzero_m == 1 and rep.m1_depth == 0


def test_profile_stops_early_and_budget():
    rep = L_power_profile(P("2*U1 - U1^2", 1), 10)
    assert rep.values == [0, 8] and rep.m_stop == 2
    with pytest.raises(TermBudgetExceeded):
        L_power_profile(P("U1 - U2"), 5, term_budget=2)  # f^2 has 3 terms


def test_profile_against_oracle():
    # frozen values from sympy expansion: L((2U1 - U1^2)^m), m = 1..4
    f = P("2*U1 - U1^2", 1)
    assert [L_oracle(f, m) for m in range(1, 5)] == [0, 8, -240, 13824]
    g = P("U1 - U2")
    assert [L(g * g), L(g * g * g)] == [L_oracle(g, 2), L_oracle(g, 3)]


def test_pairing_examples():
    assert pairing(P("U1"), P("U1")) == 2
    assert pairing(P("1"), P("1")) == 1
    assert pairing(P("U1 - U2"), P("U1 - U2")) == 2


@settings(max_examples=100, deadline=None)
@given(polys(max_deg=4))
def test_pairing_positive_definite(f):
    if f:
        assert pairing(f, f) > 0
    else:
        assert pairing(f, f) == 0


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_linearity(data):
    n = data.draw(st.integers(1, 3))
    f, g = data.draw(polys(n=n)), data.draw(polys(n=n))
    a = Fraction(data.draw(st.integers(-5, 5)), data.draw(st.integers(1, 4)))
    b = data.draw(st.integers(-5, 5))
    assert L(f.scale(a) + g.scale(b)) == a * L(f) + b * L(g)


@settings(max_examples=40, deadline=None)
@given(polys(n=1), polys(n=1))
def test_multiplicative_on_disjoint_variables(f1, g1):
    f = SparsePoly(U(2), {(e[0], 0): c for e, c in f1.terms()})
    g = SparsePoly(U(2), {(0, e[0]): c for e, c in g1.terms()})
    assert L(f * g) == L(f) * L(g)


def test_L_on_z_space_matches():
    f = P("U1^2 - 3*U2")
    assert L(convert_space(f, Z(2))) == L(f)


def test_random_poly_nonzero(rng):
    for _ in range(50):
        f = random_poly(rng, 3, 5)
        assert f and f.degree() <= 5
        assert all(-9 <= c <= 9 for _, c in f.terms())
