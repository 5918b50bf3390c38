"""Image of d/dz - a on B = A[z] with A = Q[a].

Polynomials here live in ``Z(1)`` with coefficients in Q[a].  The a-order of
a coefficient is its lowest a-exponent; membership in the image is decided
by the closed-form congruence in ``criterion`` and, independently, by the
peel-off construction in ``witness``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import INF, factorial
from .errors import ConsistencyError, DegreeBound, PreconditionFailed, RingMismatch
from .lfunctional import L
from .linalg import solve_combination
from .poly import A1, QQ, PolynomialRing, SparsePoly, Z, pow_poly

RING = PolynomialRing(A1, QQ)
B = Z(1)
PROBE_WINDOW = 4


def a_poly(k: int = 1, c=1) -> SparsePoly:
    """c * a^k as an element of Q[a]."""
    return SparsePoly.monomial(A1, (k,), c, QQ)


def z_poly(j: int = 1, coeff=None) -> SparsePoly:
    """coeff * z^j in B (coeff defaults to 1)."""
    coeff = a_poly(0) if coeff is None else coeff
    return SparsePoly(B, {(j,): coeff}, RING)


def v_a(c):
    """a-order of an element of Q[a] (or of B, taken over all coefficients)."""
    if isinstance(c, SparsePoly) and c.ring == RING:
        return min((v_a(x) for x in c._terms.values()), default=INF)
    if not isinstance(c, SparsePoly):
        return INF if c == 0 else 0
    return min((e[0] for e in c._terms), default=INF)


def coefficients(f: SparsePoly):
    """[b_0, ..., b_d] as elements of Q[a]."""
    d = f.degree()
    zero = SparsePoly.zero(A1, QQ)
    return [f._terms.get((k,), zero) for k in range(d + 1)]


def _check(f):
    if f.space != B or f.ring != RING:
        raise RingMismatch(f"expected a polynomial in Q[a][z1], got {f.ring}[{f.space}]")


def criterion(f: SparsePoly) -> bool:
    """b_d = 0 mod a and sum_k k! b_k a^(d-k) = 0 mod a^(d+1)."""
    _check(f)
    if not f:
        return True
    b = coefficients(f)
    d = len(b) - 1
    if v_a(b[d]) < 1:
        return False
    total = SparsePoly.zero(A1, QQ)
    for k, bk in enumerate(b):
        if bk:
            total = total + bk.shift((d - k,)).scale(factorial(k))
    return v_a(total) >= d + 1


def apply_D(h: SparsePoly) -> SparsePoly:
    """(d/dz - a) h."""
    return h.derivative(0) - h * a_poly(1)


@dataclass
class ImDWitness:
    h: object
    f: SparsePoly

    def verify(self) -> bool:
        return apply_D(self.h) == self.f


def witness(f: SparsePoly):
    """Peel the top term: c_d = -b_d / a, subtract (d/dz - a)(c_d z^d), repeat."""
    _check(f)
    rest = f
    h = SparsePoly.zero(B, RING)
    while rest:
        d = rest.degree()
        bd = rest._terms[(d,)]
        if v_a(bd) < 1:
            return None
        cd = SparsePoly(A1, {(e[0] - 1,): -c for e, c in bd._terms.items()}, QQ)
        piece = z_poly(d, cd)
        h = h + piece
        rest = rest - apply_D(piece)
    return ImDWitness(h, f)


def bounded_solve(f: SparsePoly, slack: int = 0):
    """Linear solve for h with deg_z h <= deg_z f + slack, deg_a h <= deg_a f + slack."""
    _check(f)
    if not f:
        return SparsePoly.zero(B, RING)
    dz = f.degree() + slack
    da = max(c.degree() for c in f._terms.values()) + slack
    cols = [(j, k) for j in range(dz + 1) for k in range(da + 1)]
    images = [_flat(apply_D(z_poly(j, a_poly(k)))) for j, k in cols]
    x = solve_combination(images, _flat(f), QQ)
    if x is None:
        return None
    h = SparsePoly.zero(B, RING)
    for (j, k), v in zip(cols, x):
        if v:
            h = h + z_poly(j, a_poly(k, v))
    return h


def _flat(f):
    return {(e[0], ie[0]): c for e, inner in f._terms.items() for ie, c in inner._terms.items()}


def monomial_rule(c, i: int) -> bool:
    """c z^i lies in the image iff v_a(c) >= i + 1."""
    return v_a(c) >= i + 1


@dataclass
class GoodfReport:
    f: SparsePoly
    g: SparsePoly
    ms: list = field(default_factory=list)
    members: list = field(default_factory=list)

    @property
    def all_members(self) -> bool:
        return all(self.members)

    def to_dict(self):
        return {"f": str(self.f), "g": str(self.g), "ms": self.ms, "members": self.members}


def goodf_verify(f: SparsePoly, g: SparsePoly, probe_window: int = PROBE_WINDOW) -> GoodfReport:
    """Check g f^m in the image for m = deg g + 1 .. deg g + probe_window."""
    _check(f)
    _check(g)
    bad = [i for i, c in enumerate(coefficients(f)) if c and v_a(c) < i + 1]
    if bad:
        raise PreconditionFailed(f"v_a(c_i) < i + 1 for i in {bad}")
    N = max(g.degree(), 0)
    rep = GoodfReport(f, g)
    for m in range(N + 1, N + probe_window + 1):
        rep.ms.append(m)
        rep.members.append(criterion(g * pow_poly(f, m)))
    return rep


@dataclass
class DeleteReport:
    f: SparsePoly
    f_tilde: SparsePoly
    rows: list = field(default_factory=list)  # (m, f^m member, f~^m member)

    @property
    def consistent(self) -> bool:
        return all(ft for _, fm, ft in self.rows if fm)

    def to_dict(self):
        return {"f": str(self.f), "f_tilde": str(self.f_tilde), "rows": self.rows}


def delete_term_experiment(f: SparsePoly, t: int, m_range) -> DeleteReport:
    """Whenever f^m is in the image, so is (f - c_t z^t)^m."""
    _check(f)
    cs = coefficients(f)
    bad = [i for i, c in enumerate(cs) if c and v_a(c) < i]
    if bad:
        raise PreconditionFailed(f"v_a(c_i) < i for i in {bad}")
    ct = cs[t] if t < len(cs) else SparsePoly.zero(A1, QQ)
    if ct and v_a(ct) < t + 1:
        raise PreconditionFailed(f"v_a(c_{t}) = {v_a(ct)} < {t + 1}")
    f_tilde = f - z_poly(t, ct) if ct else f
    rep = DeleteReport(f, f_tilde)
    for m in m_range:
        fm = criterion(pow_poly(f, m))
        ft = criterion(pow_poly(f_tilde, m))
        rep.rows.append((m, fm, ft))
    return rep


def substitute_az(g: SparsePoly) -> SparsePoly:
    """g(z) in Q[z] -> g(a z) in Q[a][z]."""
    return SparsePoly(B, {(j,): a_poly(j, c) for (j,), c in g._terms.items()}, RING)


def scaled_L_test(g: SparsePoly, N: int) -> bool:
    """Membership of g(a z), decided by the criterion and by a^N L(g) = 0 mod a^(N+1)."""
    if g.space != B or g.ring != QQ:
        raise RingMismatch("expected g in Q[z1]")
    if g.degree() > N:
        raise DegreeBound(f"deg g = {g.degree()} exceeds N = {N}")
    via_criterion = criterion(substitute_az(g))
    scaled = a_poly(N, L(g)) if L(g) else SparsePoly.zero(A1, QQ)
    via_L = v_a(scaled) >= N + 1
    if via_criterion != via_L:
        raise ConsistencyError(f"criterion={via_criterion} but scaled L test={via_L} for {g}")
    return via_L
