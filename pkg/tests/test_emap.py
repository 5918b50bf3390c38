from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from mathieu_lab import lp
from mathieu_lab.emap import (
    E, CertifiedM1M2, ExtremalPositive, Inconclusive, apply_D, in_image_D, m2_probe, newton_polyhedron,
    preimage_D, screen, separating_direction,
)
from mathieu_lab.errors import ZeroPolynomial
from mathieu_lab.lfunctional import L
from mathieu_lab.poly import SparsePoly, U, XiZ, Z, from_U, parse_poly, pow_poly

from oracles import E_oracle, as_sympy
from test_poly import polys


def X(text, n=1):
    return parse_poly(text, XiZ(n))


def test_E_examples():
    assert E(X("x1*z1")) == 1
    assert E(X("x1")) == 0
    assert E(X("x1^2*z1^2")) == 2
    assert E(X("x1^2*z1^3")) == parse_poly("6*z1", Z(1))
    assert E(X("x1*z2", 2)) == 0


@settings(max_examples=80, deadline=None)
@given(polys(space_kind=XiZ, max_deg=4))
def test_E_matches_differentiation(f):
    expected, zs = E_oracle(f)
    assert as_sympy(E(f), zs) == expected


def test_in_image_examples():
    assert in_image_D(X("x1*z2", 2))
    assert not in_image_D(X("1"))
    assert in_image_D(apply_D([X("z1^3 - 2*x1", 1)]))


def test_apply_D_examples():
    assert apply_D([X("z1")]) == X("x1*z1 - 1")
    assert apply_D([SparsePoly.zero(XiZ(2))] * 2) == 0
    assert apply_D([X("1")]) == X("x1")
    with pytest.raises(ValueError):
        apply_D([X("1", 2)])


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_E_kills_image(data):
    n = data.draw(st.integers(1, 3))
    hs = [data.draw(polys(n=n, space_kind=XiZ, max_deg=4)) for _ in range(n)]
    assert E(apply_D(hs)) == 0


@settings(max_examples=60, deadline=None)
@given(polys(space_kind=U, max_deg=4))
def test_E_restricts_to_L(q):
    assert E(from_U(q)) == SparsePoly.constant(Z(q.space.n), L(q))


def test_E_on_diagonal_monomials_exhaustive():
    from mathieu_lab.search import monomials_up_to
    for n in (1, 2, 3):
        for e in monomials_up_to(n, 6, include_one=True):
            q = SparsePoly.monomial(U(n), e)
            assert E(from_U(q)) == L(q)


@settings(max_examples=60, deadline=None)
@given(polys(space_kind=XiZ, max_deg=4, max_terms=1))
def test_E_preserves_degree_and_multidegree(f):
    for e, _ in f.terms():
        mono = SparsePoly.monomial(f.space, e)
        img = E(mono)
        n = f.space.n
        for ze, _ in img.terms():
            assert tuple(ze) == tuple(b - a for a, b in zip(e[:n], e[n:]))


def test_preimage_solver():
    f = apply_D([X("z1^2 + x1*z1")])
    hs = preimage_D(f)
    assert hs is not None and apply_D(hs) == f
    assert preimage_D(X("1")) is None
    assert preimage_D(SparsePoly.zero(XiZ(2))) == (0, 0)


def test_newton_examples():
    N = newton_polyhedron(X("z1*x2 + z2*x1", 2))
    assert sorted(N.points) == [(-1, 1), (1, -1)]
    assert sorted(N.vertices) == [(-1, 1), (1, -1)]
    N = newton_polyhedron(X("x1*z1"))
    assert N.points == [(0,)] and N.vertices == [(0,)]
    N = newton_polyhedron(X("z1 + x1*z1^2 + x1^2*z1^3"))
    assert N.points == [(1,)] and N.vertices == [(1,)]
    with pytest.raises(ZeroPolynomial):
        newton_polyhedron(SparsePoly.zero(XiZ(1)))


def test_newton_interior_point():
    N = newton_polyhedron(X("z1 + x1 + 5*x1*z1"))
    assert sorted(N.points) == [(-1,), (0,), (1,)]
    assert sorted(N.vertices) == [(-1,), (1,)]


def _brute_in_hull(x, others):
    """Caratheodory: x is in conv(others) iff it is in the hull of an affinely independent subset."""
    d = len(x)
    for k in range(1, min(d + 1, len(others)) + 1):
        for sub in combinations(others, k):
            lam = sp.symbols(f"l0:{k}")
            eqs = [sum(l * p[i] for l, p in zip(lam, sub)) - x[i] for i in range(d)] + [sum(lam) - 1]
            sol = sp.solve(eqs, lam, dict=True)
            if len(sol) == 1 and all(s in sol[0] for s in lam) and all(sol[0][s] >= 0 for s in lam):
                return True
    return False


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda d: st.lists(st.tuples(*[st.integers(-3, 3)] * d), min_size=2, max_size=6, unique=True)))
def test_extremality_matches_brute_force(points):
    for k, r in enumerate(points):
        others = points[:k] + points[k + 1:]
        assert lp.in_convex_hull(r, others) == _brute_in_hull(r, others)


def test_separating_direction_examples():
    assert separating_direction([(-1, -2)]) is not None
    assert separating_direction([(1, 1)]) is None
    v = separating_direction([(-2, 1), (1, -2)])
    assert v == (Fraction(1, 2), Fraction(1, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda d: st.lists(st.tuples(*[st.integers(-4, 4)] * d), min_size=1, max_size=5, unique=True)))
def test_separating_direction_valid_and_complete(points):
    v = separating_direction(points)
    n = len(points[0])
    # float oracle for the optimal margin
    res = linprog(c=[0] * n + [-1], A_ub=[list(r) + [1] for r in points], b_ub=[0] * len(points),
                  A_eq=[[1] * n + [0]], b_eq=[1], bounds=[(0, None)] * n + [(None, 1)])
    if v is None:
        assert -res.fun <= 1e-9
    else:
        assert all(x >= 0 for x in v) and sum(v) == 1
        assert all(sum(a * b for a, b in zip(v, r)) < 0 for r in points)
        assert -res.fun > 1e-9


def test_screen_examples():
    assert isinstance(screen(X("x1^2*z1"), 4), CertifiedM1M2)
    v = screen(X("x1*z1"), 4)
    assert isinstance(v, ExtremalPositive) and v.r == (0,) and v.profile.first_nonzero_m == 1
    assert isinstance(screen(X("x1*z2 + x2*z1", 2), 4), Inconclusive)


def test_screen_extremal_uses_summand():
    # summand at r = 1 is z1*(U1 - 1); U1*(U1 - 1) has L = 2 - 1 = 1
    v = screen(X("x1*z1^2 - z1 + x1^3"), 4)
    assert isinstance(v, ExtremalPositive) and v.r == (1,)
    assert v.q == parse_poly("U1 - 1", U(1))


@settings(max_examples=40, deadline=None)
@given(polys(space_kind=XiZ, max_deg=3, max_terms=3))
def test_certified_screen_implies_vanishing_powers(f):
    if not f:
        return
    v = screen(f, 3)
    if isinstance(v, CertifiedM1M2):
        g = f
        for _ in range(3):
            assert E(g) == 0
            g = g * f


def test_m2_probe_examples():
    rows = m2_probe(X("x1*z2", 2), [X("z1", 2)], 1, 4)
    # at m = 1, E(x1*z1*z2) = z2, so the table starts at m >= 2
    assert [r["zero"] for r in rows] == [False, True, True, True]
    rows = m2_probe(X("1"), [X("1")], 1, 2)
    assert not any(r["zero"] for r in rows)
    rows = m2_probe(X("x1^2*z1"), [X("z1")], 2, 5)
    assert all(r["zero"] for r in rows)
