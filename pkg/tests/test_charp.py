import pytest
from hypothesis import given, settings, strategies as st

from mathieu_lab import charp
from mathieu_lab.errors import MembershipUnknown, NotASyzygy, NotPrime, PreconditionFailed, ZeroPolynomial
from mathieu_lab.search import monomials_up_to
from mathieu_lab.selftest import random_p2_instance


def ctx(p, n):
    return charp.CharPContext(p, n)


def test_context_validation():
    with pytest.raises(NotPrime):
        ctx(4, 1)


def test_syzygy_examples():
    c = ctx(5, 2)
    S = charp.koszul_syzygy(c, [c.parse_A("t2"), c.parse_A("-t1")])
    assert S.entry(0, 1) == 1 and S.entry(1, 0) == -1
    S = charp.koszul_syzygy(c, [c.parse_A("0"), c.parse_A("0")])
    assert all(not v for v in S.g.values())
    S = charp.koszul_syzygy(c, [c.parse_A("t1*t2"), c.parse_A("-t1^2")])
    assert S.entry(0, 1) == c.parse_A("t1")
    with pytest.raises(NotASyzygy):
        charp.koszul_syzygy(c, [c.parse_A("t1"), c.parse_A("t1")])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(2, 3), st.data())
def test_syzygy_reconstructs(p, n, data):
    c = ctx(p, n)
    # g_i = sum_j s_ij t_j with s antisymmetric is always a syzygy
    mono = st.tuples(*[st.integers(0, 2)] * n)
    s = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = c.t(0, 0, 0)
            for _ in range(data.draw(st.integers(0, 2))):
                v = v + c.parse_A("1").shift(data.draw(mono)).scale(data.draw(st.integers(1, p - 1)))
            s[(i, j)], s[(j, i)] = v, -v
    g = []
    for i in range(n):
        acc = c.t(0, 0, 0)
        for j in range(n):
            if j != i:
                acc = acc + s[(i, j)] * c.t(j)
        g.append(acc)
    S = charp.koszul_syzygy(c, g)
    assert S.antisymmetric()
    assert S.reconstruct(c) == g


def test_frobenius_examples():
    c = ctx(2, 1)
    w = charp.frobenius_witness(c, 0, (1,))
    assert w.h[0] == c.parse("t1*z1 + 1")
    assert w.target == c.parse("t1^2*z1") and w.verify(c)
    w = charp.frobenius_witness(c, 0, (0,))
    assert w.h[0] == c.parse("t1") and w.verify(c)
    c3 = ctx(3, 1)
    w = charp.frobenius_witness(c3, 0, (1,))
    assert w.target == c3.parse("t1^3*z1") and w.verify(c3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_frobenius_power_is_scalar(p):
    for n in (1, 2):
        c = ctx(p, n)
        for r in monomials_up_to(n, 4, include_one=True):
            for i in range(n):
                h = c.monomial(r)
                for _ in range(p):
                    h = charp.D_i(c, h, i)
                assert h == c.monomial(r, c.t(i, p, -1))
                assert charp.frobenius_witness(c, i, r).verify(c)


def test_leading_coeffs_examples():
    c = ctx(3, 1)
    assert charp.leading_coeffs_in_ideal(c, c.parse("t1*z1^2"))
    assert not charp.leading_coeffs_in_ideal(c, c.parse("z1^2"))
    assert charp.leading_coeffs_in_ideal(c, c.parse("t1*z1^2 + 1"))
    with pytest.raises(ZeroPolynomial):
        charp.leading_coeffs_in_ideal(c, c.zero())


def test_leading_coeffs_on_image_elements(rng):
    for _ in range(100):
        p, n = rng.choice([2, 3, 5]), rng.randint(1, 2)
        c = ctx(p, n)
        hs = []
        for _ in range(n):
            h = c.zero()
            for _ in range(rng.randint(1, 3)):
                r = tuple(rng.randint(0, 3) for _ in range(n))
                te = tuple(rng.randint(0, 2) for _ in range(n))
                h = h + c.monomial(r, c.parse_A("1").shift(te).scale(rng.randint(1, p - 1)))
            hs.append(h)
        g = charp.apply_D(c, hs)
        if g:
            assert charp.leading_coeffs_in_ideal(c, g)


def test_bounded_membership_examples():
    c = ctx(2, 1)
    g = c.parse("t1^2*z1")
    w = charp.bounded_membership(c, g)
    assert w is not None and w.verify(c)
    assert charp.bounded_membership(ctx(2, 1), c.parse("1"), 3) is None
    w = charp.bounded_membership(c, c.zero())
    assert w is not None and all(not h for h in w.h)


def test_cp_check_examples():
    c = ctx(2, 1)
    assert charp.cp_check(c, c.parse("t1*z1")).status == "pass"
    assert charp.cp_check(c, c.parse("1")).status == "vacuous"
    c2 = ctx(2, 2)
    assert charp.cp_check(c2, c2.parse("t1*z1 + t2")).status == "pass"


def test_cp_check_unknown_is_reported(monkeypatch):
    c = ctx(2, 1)
    monkeypatch.setattr(charp, "bounded_membership", lambda *a, **k: None)
    with pytest.raises(MembershipUnknown):
        charp.cp_check(c, c.parse("t1*z1"))


def test_p2_examples():
    c = ctx(2, 1)
    rep = charp.theorem_p2_verify(c, c.parse("t1*z1"), c.parse("z1"))
    assert rep.m == 4 and rep.verified
    rep = charp.theorem_p2_verify(c, c.zero(), c.parse("z1"))
    assert rep.verified and all(not h for h in rep.witness.h)
    c2 = ctx(2, 2)
    rep = charp.theorem_p2_verify(c2, c2.parse("t1*z2 + t2*z1"), c2.parse("1"))
    assert rep.verified
    with pytest.raises(PreconditionFailed):
        charp.theorem_p2_verify(c, c.parse("z1 + t1"), c.parse("1"))


def test_p2_random(rng):
    for _ in range(50):
        c, f, g = random_p2_instance(rng)
        assert charp.theorem_p2_verify(c, f, g).verified


@pytest.mark.parametrize("p", [2, 3, 5])
def test_degenerate(p):
    rep = charp.degenerate_counterexample(p)
    assert rep.one_in_image and not rep.target_in_image
    assert rep.image_basis_degree >= 4
    assert not any(found for _, found in rep.solver_found)
    assert rep.confirmed
