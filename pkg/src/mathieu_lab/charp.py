"""Positive characteristic: B = F_p[t1..tn][z1..zn] with D_i = d/dz_i - t_i.

The sequence a_i = t_i is regular and the ideal (t1..tn) is monomial, so
ideal membership reduces to inspecting t-exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .arith import is_prime
from .errors import (
    DecompositionFailed,
    MembershipUnknown,
    NotASyzygy,
    NotPrime,
    PreconditionFailed,
    RingMismatch,
    ZeroPolynomial,
)
from .linalg import Echelon, solve_combination
from .poly import GF, PolynomialRing, SparsePoly, T, Z, compositions, parse_poly, pow_poly


@dataclass(frozen=True)
class CharPContext:
    p: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def field(self):
        return GF(self.p)

    @property
    def A(self):
        """Coefficient ring F_p[t1..tn]."""
        return PolynomialRing(T(self.n), self.field)

    @property
    def space(self):
        return Z(self.n)

    def t(self, i: int, k: int = 1, c=1) -> SparsePoly:
        """c * t_i^k in A (0-based i)."""
        e = [0] * self.n
        e[i] = k
        return SparsePoly.monomial(T(self.n), e, c, self.field)

    def a_one(self) -> SparsePoly:
        return SparsePoly.constant(T(self.n), 1, self.field)

    def monomial(self, r, coeff=None) -> SparsePoly:
        """coeff * z^r in B."""
        coeff = self.a_one() if coeff is None else coeff
        return SparsePoly(self.space, {tuple(r): coeff}, self.A)

    def zero(self) -> SparsePoly:
        return SparsePoly.zero(self.space, self.A)

    def parse(self, text: str) -> SparsePoly:
        return parse_poly(text, self.space, self.A)

    def parse_A(self, text: str) -> SparsePoly:
        return parse_poly(text, T(self.n), self.field)

    def check(self, f: SparsePoly):
        if f.space != self.space or f.ring != self.A:
            raise RingMismatch(f"expected an element of {self.A}[{','.join(self.space.names)}]")


# ---------------------------------------------------------------- operators


def D_i(ctx: CharPContext, h: SparsePoly, i: int, a=None) -> SparsePoly:
    """(d/dz_i - a_i) h with a_i = t_i unless ``a`` overrides it."""
    a = ctx.t(i) if a is None else a
    out = h.derivative(i)
    if a:
        out = out - h * a
    return out


def apply_D(ctx: CharPContext, hs, avals=None) -> SparsePoly:
    total = ctx.zero()
    for i, h in enumerate(hs):
        total = total + D_i(ctx, h, i, None if avals is None else avals[i])
    return total


@dataclass
class Witness:
    """Tuple h with sum_i (d/dz_i - a_i) h_i == target."""

    h: tuple
    target: SparsePoly

    def verify(self, ctx: CharPContext, avals=None) -> bool:
        return apply_D(ctx, self.h, avals) == self.target


# ---------------------------------------------------------------- Koszul syzygies


@dataclass
class SyzygyMatrix:
    g: dict  # (i, j) -> element of A, i != j

    def entry(self, i, j):
        return self.g[(i, j)]

    def antisymmetric(self) -> bool:
        return all(self.g[(i, j)] == -self.g[(j, i)] for (i, j) in self.g)

    def reconstruct(self, ctx: CharPContext):
        n = ctx.n
        out = []
        for i in range(n):
            acc = SparsePoly.zero(T(n), ctx.field)
            for j in range(n):
                if j != i:
                    acc = acc + self.g[(i, j)] * ctx.t(j)
            out.append(acc)
        return out


def koszul_syzygy(ctx: CharPContext, g) -> SyzygyMatrix:
    """Antisymmetric g_ij with g_i = sum_j g_ij t_j, given sum_i t_i g_i = 0.

    For each monomial M of sum_i t_i g_i, the contributions c_i (from the
    terms M / t_i of g_i) sum to zero; they are routed through the pivot
    i0 = smallest index with t_i0 | M.
    """
    n = ctx.n
    g = list(g)
    if len(g) != n:
        raise ValueError(f"expected {n} components")
    total = SparsePoly.zero(T(n), ctx.field)
    for i, gi in enumerate(g):
        total = total + gi * ctx.t(i)
    if total:
        raise NotASyzygy("sum t_i g_i != 0")
    contrib = {}
    for i, gi in enumerate(g):
        for e, c in gi._terms.items():
            M = tuple(x + (1 if k == i else 0) for k, x in enumerate(e))
            contrib.setdefault(M, {})[i] = c
    acc = {(i, j): {} for i in range(n) for j in range(n) if i != j}
    for M, cs in contrib.items():
        i0 = next(k for k in range(n) if M[k] > 0)
        for i, c in cs.items():
            if i == i0:
                continue
            e = tuple(x - (1 if k in (i, i0) else 0) for k, x in enumerate(M))
            acc[(i, i0)][e] = acc[(i, i0)].get(e, 0) + c
            acc[(i0, i)][e] = acc[(i0, i)].get(e, 0) - c
    return SyzygyMatrix({k: SparsePoly(T(n), v, ctx.field) for k, v in acc.items()})


# ---------------------------------------------------------------- Frobenius witnesses


def frobenius_witness(ctx: CharPContext, i: int, r) -> Witness:
    """h with (d/dz_i - t_i) h = t_i^p z^r, namely h = -(d/dz_i - t_i)^(p-1) z^r."""
    h = ctx.monomial(r)
    for _ in range(ctx.p - 1):
        h = D_i(ctx, h, i)
    h = -h
    hs = tuple(h if k == i else ctx.zero() for k in range(ctx.n))
    return Witness(hs, ctx.monomial(r, ctx.t(i, ctx.p)))


# ---------------------------------------------------------------- ideal tests


def in_ideal(c: SparsePoly) -> bool:
    """Membership in (t1..tn): no constant term."""
    return all(any(e) for e in c._terms)


def in_frobenius_ideal(c: SparsePoly, p: int) -> bool:
    """Membership in (t1^p..tn^p): every monomial has some exponent >= p."""
    return all(any(x >= p for x in e) for e in c._terms)


def top_summand(f: SparsePoly) -> SparsePoly:
    d = f.degree()
    return SparsePoly._make(f.space, f.ring, {e: c for e, c in f._terms.items() if sum(e) == d})


def leading_coeffs_in_ideal(ctx: CharPContext, g: SparsePoly) -> bool:
    """All coefficients of the top z-degree summand lie in (t1..tn)."""
    ctx.check(g)
    if not g:
        raise ZeroPolynomial("leading coefficients of 0 are undefined")
    return all(in_ideal(c) for c in top_summand(g)._terms.values())


# ---------------------------------------------------------------- bounded membership


def _flat(f: SparsePoly) -> dict:
    return {(e, ie): c for e, inner in f._terms.items() for ie, c in inner._terms.items()}


def _monos(total_max: int, k: int):
    return [e for d in range(total_max + 1) for e in compositions(d, k)]


def _bounded_preimage(ctx, g, slack, avals=None):
    n = ctx.n
    if not g:
        return Witness(tuple(ctx.zero() for _ in range(n)), g)
    dz = g.degree() + slack
    dt = max(c.degree() for c in g._terms.values())
    zmon = _monos(dz, n)
    tmon = _monos(dt, n)
    cols, images = [], []
    one = ctx.field
    for i in range(n):
        for ze in zmon:
            for te in tmon:
                basis = ctx.monomial(ze, SparsePoly.monomial(T(n), te, 1, one))
                images.append(_flat(D_i(ctx, basis, i, None if avals is None else avals[i])))
                cols.append((i, ze, te))
    x = solve_combination(images, _flat(g), ctx.field)
    if x is None:
        return None
    parts = [{} for _ in range(n)]
    for (i, ze, te), v in zip(cols, x):
        if v:
            parts[i].setdefault(ze, {})[te] = v
    hs = tuple(
        SparsePoly(ctx.space, {ze: SparsePoly(T(n), d, ctx.field) for ze, d in part.items()}, ctx.A)
        for part in parts
    )
    return Witness(hs, g)


def bounded_membership(ctx: CharPContext, g: SparsePoly, slack: Optional[int] = None) -> Optional[Witness]:
    """Witness with deg_z h_i <= deg_z g + slack and deg_t h_i <= deg_t g, or None.

    None only means that no witness exists within the bound.
    """
    ctx.check(g)
    slack = ctx.n * ctx.p if slack is None else slack
    if slack < 0:
        raise ValueError("slack must be >= 0")
    return _bounded_preimage(ctx, g, slack)


# ---------------------------------------------------------------- corollary / theorem checks


@dataclass
class CpReport:
    f: SparsePoly
    status: str  # "pass", "vacuous" or "fail"
    membership: str  # "witness" or "excluded" (top coefficients outside the ideal)
    offending: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def to_dict(self):
        return {"f": str(self.f), "status": self.status, "membership": self.membership, "offending": self.offending}


def cp_check(ctx: CharPContext, f: SparsePoly, slack: Optional[int] = None) -> CpReport:
    """If f^p is in the image then c_r^p lies in (t1..tn) for every coefficient c_r."""
    ctx.check(f)
    fp = pow_poly(f, ctx.p)
    if fp and not leading_coeffs_in_ideal(ctx, fp):
        return CpReport(f, "vacuous", "excluded")
    if bounded_membership(ctx, fp, slack) is None:
        raise MembershipUnknown(f"no witness for f^{ctx.p} within the degree bound")
    bad = [str(c) for _, c in f.terms() if not in_ideal(pow_poly(c, ctx.p))]
    return CpReport(f, "fail" if bad else "pass", "witness", bad)


@dataclass
class P2Report:
    f: SparsePoly
    g: SparsePoly
    m: int
    witness: Witness
    verified: bool
    pieces: int

    def to_dict(self):
        return {"f": str(self.f), "g": str(self.g), "m": self.m, "verified": self.verified, "pieces": self.pieces}


def theorem_p2_verify(ctx: CharPContext, f: SparsePoly, g: SparsePoly, m: Optional[int] = None) -> P2Report:
    """Assemble and check a witness for f^m g with m >= p^2.

    Every coefficient of f^m g lies in (t1^p..tn^p); each monomial
    c t^e z^r is split as (c t^(e - p e_i)) t_i^p z^r and mapped to the
    corresponding multiple of a Frobenius witness.
    """
    ctx.check(f)
    ctx.check(g)
    p, n = ctx.p, ctx.n
    m = p * p if m is None else m
    if m < p * p:
        raise ValueError("m must be >= p^2")
    bad = [str(c) for _, c in f.terms() if not in_ideal(pow_poly(c, p))]
    if bad:
        raise PreconditionFailed(f"coefficients with c^p outside (t1..tn): {bad}")
    target = pow_poly(f, m) * g
    hs = [ctx.zero() for _ in range(n)]
    cache = {}
    pieces = 0
    for r, c in target.terms():
        for te, v in c.terms():
            i = next((k for k in range(n) if te[k] >= p), None)
            if i is None:
                raise DecompositionFailed(f"t^{te} z^{r} is not in (t1^p..tn^p)")
            key = (i, r)
            if key not in cache:
                cache[key] = frobenius_witness(ctx, i, r).h[i]
            rest = tuple(x - (p if k == i else 0) for k, x in enumerate(te))
            hs[i] = hs[i] + cache[key] * SparsePoly.monomial(T(n), rest, v, ctx.field)
            pieces += 1
    w = Witness(tuple(hs), target)
    ok = w.verify(ctx)
    if not ok:
        raise DecompositionFailed("assembled witness does not reproduce f^m g")
    return P2Report(f, g, m, w, ok, pieces)


# ---------------------------------------------------------------- degenerate case a = 0


@dataclass
class DegenerateReport:
    p: int
    one_in_image: bool
    target_in_image: bool
    solver_found: list  # (slack, witness found?)
    image_basis_degree: int

    @property
    def confirmed(self) -> bool:
        return self.one_in_image and not self.target_in_image and not any(f for _, f in self.solver_found)

    def to_dict(self):
        return {
            "p": self.p,
            "one_in_image": self.one_in_image,
            "z^(p-1)_in_image": self.target_in_image,
            "solver_found": self.solver_found,
            "image_basis_degree": self.image_basis_degree,
            "confirmed": self.confirmed,
        }


def degenerate_counterexample(p: int, degree: Optional[int] = None) -> DegenerateReport:
    """With n = 1 and a = 0 over F_p: 1 = d/dz z is in the image, z^(p-1) is not.

    d/dz lowers degree by exactly one, so z^(p-1) is in the image iff it is in
    the span of d/dz z^j for j <= p; the row space of d/dz on z^0..z^K is
    computed exactly for K = ``degree`` (default max(p + 1, 4)).
    """
    ctx = CharPContext(p, 1)
    K = max(p + 1, 4) if degree is None else max(degree, p)
    ech = Echelon(ctx.field)
    for j in range(K + 1):
        if j % p:
            ech.add({j - 1: j})
    target_in = ech.in_span({p - 1: 1})
    zero_a = [SparsePoly.zero(T(1), ctx.field)]
    one_in = ech.in_span({0: 1}) and apply_D(ctx, [ctx.monomial((1,))], zero_a) == ctx.monomial((0,))
    found = []
    for slack in range(p + 1):
        w = _bounded_preimage(ctx, ctx.monomial((p - 1,)), slack, zero_a)
        found.append((slack, w is not None))
    return DegenerateReport(p, one_in, target_in, found, K)
