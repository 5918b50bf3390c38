"""Invariant suite behind ``mathieu-lab selftest``.

Each check returns (ok, detail).  Sample sizes are scaled by ``scale`` so the
default run stays quick; ``scale=1.0`` matches the sizes used in the tests.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import combinations

from . import cases, charp, emap, imd1
from .arith import factorial, multinomial, primes_below, vp
from .emap import E, apply_D
from .lfunctional import L, L_power_profile, pairing, random_poly
from .poly import SparsePoly, XiZ, compositions, from_U, multidegree_split, pow_poly
from .search import monomials_up_to


def _n(k, scale):
    return max(1, int(k * scale))


def random_xiz(rng, n, max_deg, terms=4):
    sp = XiZ(n)
    out = SparsePoly.zero(sp)
    for _ in range(rng.randint(1, terms)):
        e = [0] * (2 * n)
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(2 * n)] += 1
        out = out + SparsePoly.monomial(sp, e, rng.randint(-9, 9))
    return out


def check_arith(rng, scale):
    for k in range(200):
        if factorial(k + 1) != (k + 1) * factorial(k):
            return False, f"factorial recurrence at {k}"
    for m in range(7):
        for d in range(1, 7):
            if sum(multinomial(m, c) for c in compositions(m, d)) != d**m:
                return False, f"multinomial sum m={m} d={d}"
    for _ in range(_n(200, scale)):
        p = rng.choice([2, 3, 5, 7])
        x, y = rng.randint(1, 10**6), rng.randint(1, 10**6)
        if vp(x * y, p) != vp(x, p) + vp(y, p):
            return False, f"vp({x}*{y}, {p})"
    return True, "factorial, multinomial, vp"


def check_ring(rng, scale):
    for _ in range(_n(100, scale)):
        n = rng.randint(1, 3)
        f, g, h = (random_poly(rng, n, 3, max_terms=4) for _ in range(3))
        if (f * g) * h != f * (g * h) or f * (g + h) != f * g + f * h or f * g != g * f:
            return False, f"ring axioms on {f}, {g}, {h}"
        a, b = rng.randint(0, 4), rng.randint(0, 4)
        if pow_poly(f, a) * pow_poly(f, b) != pow_poly(f, a + b):
            return False, f"power law on {f}"
    for _ in range(_n(100, scale)):
        f = random_xiz(rng, rng.randint(1, 3), 4)
        parts = multidegree_split(f)
        total = SparsePoly.zero(f.space)
        for _, s in parts:
            total = total + s
        if total != f:
            return False, f"split of {f}"
    return True, "ring axioms, powers, multidegree split"


def check_lfunctional(rng, scale):
    for _ in range(_n(1000, scale)):
        f = random_poly(rng, rng.randint(1, 3), 5)
        if pairing(f, f) <= 0:
            return False, f"pairing({f}, {f}) <= 0"
    for _ in range(_n(500, scale)):
        q = random_poly(rng, rng.randint(1, 3), 4)
        if E(from_U(q)) != SparsePoly.constant(emap.Z(q.space.n), L(q)):
            return False, f"E(q(xz)) != L(q) for {q}"
    return True, "positive definite pairing, E agrees with L"


def check_kernel(rng, scale):
    for _ in range(_n(500, scale)):
        n = rng.randint(1, 3)
        hs = [random_xiz(rng, n, 4) for _ in range(n)]
        if E(apply_D(hs)):
            return False, f"E(D(h)) != 0 for {hs}"
    return True, "E kills the image of D"


def check_imd1(rng, scale):
    for _ in range(_n(500, scale)):
        f = random_b(rng)
        ok = imd1.criterion(f)
        if ok:
            w = imd1.witness(f)
            if w is None or not w.verify():
                return False, f"criterion true but no witness for {f}"
        elif imd1.bounded_solve(f) is not None:
            return False, f"criterion false but solve succeeded for {f}"
    for k in range(7):
        for i in range(7):
            c = imd1.a_poly(k)
            if imd1.monomial_rule(c, i) != imd1.criterion(imd1.z_poly(i, c)):
                return False, f"monomial rule at a^{k} z^{i}"
    return True, "criterion, witness, monomial rule"


def random_b(rng, max_z=5, max_a=5):
    """Random element of Q[a][z]; biased toward image members half the time."""
    terms = {}
    for _ in range(rng.randint(1, 4)):
        j, k = rng.randint(0, max_z), rng.randint(0, max_a)
        terms[(j, k)] = terms.get((j, k), 0) + rng.randint(-5, 5)
    f = SparsePoly.zero(imd1.B, imd1.RING)
    for (j, k), c in terms.items():
        if c:
            f = f + imd1.z_poly(j, imd1.a_poly(k, c))
    if rng.random() < 0.5:
        h = SparsePoly.zero(imd1.B, imd1.RING)
        for (j, k), c in terms.items():
            if c and j < max_z and k < max_a:
                h = h + imd1.z_poly(j, imd1.a_poly(k, c))
        f = imd1.apply_D(h)
    return f


def check_charp(rng, scale):
    for p in (2, 3, 5):
        for n in (1, 2):
            ctx = charp.CharPContext(p, n)
            for r in monomials_up_to(n, 4, include_one=True):
                for i in range(n):
                    h = ctx.monomial(r)
                    for _ in range(p):
                        h = charp.D_i(ctx, h, i)
                    if h != ctx.monomial(r, ctx.t(i, p, -1)):
                        return False, f"(d - t)^p z^{r} at p={p}"
        if not charp.degenerate_counterexample(p).confirmed:
            return False, f"degenerate case p={p}"
    for _ in range(_n(100, scale)):
        ctx, f, g = random_p2_instance(rng)
        charp.theorem_p2_verify(ctx, f, g)
    return True, "Frobenius identity, p^2 witnesses, degenerate case"


def random_p2_instance(rng, max_terms=2):
    """(ctx, f, g) with every coefficient of f in (t1..tn)."""
    p = rng.choice([2, 3])
    n = rng.randint(1, 2)
    ctx = charp.CharPContext(p, n)
    f = ctx.zero()
    for _ in range(rng.randint(1, max_terms)):
        r = tuple(rng.randint(0, 1) for _ in range(n))
        i = rng.randrange(n)
        f = f + ctx.monomial(r, ctx.t(i, 1, rng.randint(1, p - 1)))
    g = ctx.zero()
    for _ in range(rng.randint(1, 2)):
        r = tuple(rng.randint(0, 2) for _ in range(n))
        g = g + ctx.monomial(r, ctx.a_one().scale(rng.randint(1, p - 1)))
    return ctx, f, g


def check_cases(rng, scale):
    for p in primes_below(200)[1:]:
        if not cases.congruence_check(p):
            return False, f"congruence at p={p}"
    for _ in range(_n(200, scale)):
        S = random_series(rng)
        r = rng.randint(1, 3)
        rep = cases.gap_series(S, r, 50)
        if not rep.check_inverse() or rep.first_hit is None:
            return False, f"gap series S={S} r={r}"
    for n in range(1, 4):
        for _ in range(_n(10, scale)):
            c = [rng.randint(-3, 3) for _ in range(n)]
            cases.linear_form_power_test(c, 1, 6)
    mons = monomials_up_to(2, 4, include_one=True)
    for M1, M2 in combinations(mons, 2):
        if not cases.two_monomial_solve(M1, M2).only_trivial:
            return False, f"two monomials {M1}, {M2}"
    return True, "congruence lemma, gap series, linear forms, two monomials"


def random_series(rng, max_deg=4):
    """Coefficients of a random S != 1 with S(0) = 1 and small rational entries."""
    while True:
        S = [1] + [Fraction(rng.randint(-3, 3), rng.choice([1, 2, 3])) for _ in range(rng.randint(1, max_deg))]
        if any(S[1:]):
            return S


def check_scaling(rng, scale):
    for _ in range(_n(50, scale)):
        f = random_poly(rng, rng.randint(1, 2), 3, coeff_bound=3, max_terms=3)
        lam = rng.choice([-3, -2, -1, 2, 3])
        a = L_power_profile(f, 6).values
        b = L_power_profile(f.scale(lam), 6).values
        if [v == 0 for v in a] != [v == 0 for v in b]:
            return False, f"scaling changes the zero pattern of {f}"
    return True, "zero pattern of L(f^m) is scaling invariant"


CHECKS = [
    ("arith", check_arith),
    ("ring", check_ring),
    ("lfunctional", check_lfunctional),
    ("kernel", check_kernel),
    ("imd1", check_imd1),
    ("charp", check_charp),
    ("cases", check_cases),
    ("scaling", check_scaling),
]


def run_selftest(seed: int = 0, scale: float = 0.2, only=None):
    """Run every check; returns a list of (name, ok, detail, seconds)."""
    results = []
    for name, fn in CHECKS:
        if only and name not in only:
            continue
        rng = random.Random(f"{seed}:{name}")
        t0 = time.perf_counter()
        try:
            ok, detail = fn(rng, scale)
        except Exception as exc:  # a raised error is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail, time.perf_counter() - t0))
    return results


__all__ = ["run_selftest", "CHECKS", "random_xiz", "random_b", "random_p2_instance", "random_series"]
