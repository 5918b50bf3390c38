import math

import pytest
from hypothesis import given, settings, strategies as st

from mathieu_lab import imd1
from mathieu_lab.arith import INF
from mathieu_lab.errors import DegreeBound, PreconditionFailed, RingMismatch
from mathieu_lab.poly import A1, QQ, SparsePoly, Z, parse_poly
from mathieu_lab.selftest import random_b


def B(text):
    return parse_poly(text, imd1.B, imd1.RING)


def A(text):
    return parse_poly(text, A1, QQ)


def test_v_a_examples():
    assert imd1.v_a(A("a^2")) == 2
    assert imd1.v_a(A("1 + a")) == 0
    assert imd1.v_a(A("0")) == INF
    assert imd1.v_a(B("a^3*z1 + a^2")) == 2


def test_v_a_multiplicative():
    for x, y in [("a + a^3", "2*a^2 - a^4"), ("1", "a"), ("3*a^5", "a - a^2")]:
        assert imd1.v_a(A(x) * A(y)) == imd1.v_a(A(x)) + imd1.v_a(A(y))


def test_criterion_examples():
    assert imd1.criterion(B("a^2*z1"))
    assert not imd1.criterion(B("a*z1"))
    assert imd1.criterion(B("0"))
    assert not imd1.criterion(B("1"))


def test_criterion_rejects_other_rings():
    with pytest.raises(RingMismatch):
        imd1.criterion(parse_poly("z1", Z(1)))


def test_witness_examples():
    w = imd1.witness(B("a^2*z1"))
    assert w.h == B("-a*z1 - 1") and w.verify()
    assert imd1.witness(B("0")).h == 0
    w = imd1.witness(B("a^2"))
    assert w.h == B("-a") and w.verify()
    assert imd1.witness(B("a*z1")) is None


def test_apply_D_matches_definition():
    h = B("3*z1^2 - a*z1 + a^4")
    assert imd1.apply_D(h) == B("6*z1 - a") - B("3*a*z1^2 - a^2*z1 + a^5")


def test_criterion_iff_witness(rng):
    seen = {True: 0, False: 0}
    for _ in range(300):
        f = random_b(rng)
        ok = imd1.criterion(f)
        seen[ok] += 1
        w = imd1.witness(f)
        if ok:
            assert w is not None and w.verify()
        else:
            assert w is None
            assert imd1.bounded_solve(f) is None
            assert imd1.bounded_solve(f, slack=2) is None
    assert seen[True] > 30 and seen[False] > 30


def test_bounded_solve_finds_members(rng):
    for _ in range(50):
        f = random_b(rng)
        if f and imd1.criterion(f):
            h = imd1.bounded_solve(f)
            assert h is not None and imd1.apply_D(h) == f


def test_monomial_rule_examples():
    assert imd1.monomial_rule(A("a^2"), 1)
    assert not imd1.monomial_rule(A("a"), 1)
    assert imd1.monomial_rule(A("0"), 5)


def test_monomial_rule_grid():
    for k in range(7):
        for i in range(7):
            for c in (A(f"a^{k}") if k else A("1"), A(f"a^{k} + a^{k + 1}") if k else A("1 + a")):
                assert imd1.monomial_rule(c, i) == imd1.criterion(imd1.z_poly(i, c))


def test_image_closed_under_sum_and_A_scaling(rng):
    members = [f for f in (random_b(rng) for _ in range(200)) if imd1.criterion(f)][:40]
    for f, g in zip(members, members[1:]):
        assert imd1.criterion(f + g)
        assert imd1.criterion(f * imd1.z_poly(0, A("2*a - a^3")))


def test_goodf_examples():
    rep = imd1.goodf_verify(B("a^2*z1"), B("z1"))
    assert rep.ms[0] == 2 and rep.all_members
    assert imd1.criterion(B("a^4*z1^3"))
    assert imd1.goodf_verify(B("0"), B("z1 + 1")).all_members
    with pytest.raises(PreconditionFailed):
        imd1.goodf_verify(B("a*z1"), B("1"))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), max_size=3))
def test_goodf_with_unit_g(spec):
    # build f with v_a(c_i) >= i + 1
    f = SparsePoly.zero(imd1.B, imd1.RING)
    for i, extra, c in spec:
        if c:
            f = f + imd1.z_poly(i, imd1.a_poly(i + 1 + extra, c))
    assert imd1.goodf_verify(f, B("1"), 3).all_members


def test_delete_term_examples():
    rep = imd1.delete_term_experiment(B("a*z1 + a^3*z1^2"), 2, range(1, 6))
    assert rep.f_tilde == B("a*z1") and rep.consistent
    rep = imd1.delete_term_experiment(B("a*z1"), 3, range(1, 3))
    assert rep.f_tilde == rep.f
    with pytest.raises(PreconditionFailed):
        imd1.delete_term_experiment(B("a*z1 + a^2*z1^2"), 2, range(1, 3))
    with pytest.raises(PreconditionFailed):
        imd1.delete_term_experiment(B("z1 + a^3*z1^2"), 2, range(1, 3))


def test_scaled_L_examples():
    assert imd1.scaled_L_test(parse_poly("z1 - 1", Z(1)), 1)
    assert not imd1.scaled_L_test(parse_poly("1", Z(1)), 0)
    assert imd1.scaled_L_test(parse_poly("0", Z(1)), 0)
    with pytest.raises(DegreeBound):
        imd1.scaled_L_test(parse_poly("z1^3", Z(1)), 2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=6))
def test_scaled_L_agrees_with_criterion(cs):
    g = SparsePoly(Z(1), {(j,): c for j, c in enumerate(cs)})
    N = max(g.degree(), 0)
    # raises ConsistencyError on disagreement
    assert imd1.scaled_L_test(g, N) == (sum(c * math.factorial(j) for j, c in enumerate(cs)) == 0)
