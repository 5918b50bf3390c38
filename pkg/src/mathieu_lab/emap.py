"""The map E on Q[xi, z], membership in Im D = Ker E, and Newton screening.

E sends xi^alpha z^beta to d^alpha/dz^alpha z^beta.  On the diagonal
subring generated by U_i = xi_i z_i it restricts to the factorial
functional, which is what the screening program below exploits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import lp
from .arith import factorial
from .errors import RingMismatch, ZeroPolynomial
from .lfunctional import L_power_profile, M1Report
from .linalg import solve_combination
from .poly import QQ, SparsePoly, U, XiZ, Z, compositions, multidegree_split, powers

SLACK = 2


def _check_xiz(f):
    if f.space.kind != "XiZ":
        raise RingMismatch(f"expected a polynomial in x1..xn, z1..zn, got {f.space}")


def E(f: SparsePoly) -> SparsePoly:
    _check_xiz(f)
    n = f.space.n
    out = {}
    for e, c in f._terms.items():
        alpha, beta = e[:n], e[n:]
        if any(a > b for a, b in zip(alpha, beta)):
            continue
        w = 1
        for a, b in zip(alpha, beta):
            if a:
                w *= factorial(b) // factorial(b - a)
        key = tuple(b - a for a, b in zip(alpha, beta))
        out[key] = out.get(key, 0) + c * w
    return SparsePoly(Z(n), out, f.ring)


def in_image_D(f: SparsePoly) -> bool:
    return not E(f)


def xi(n: int, i: int, ring=QQ) -> SparsePoly:
    e = [0] * (2 * n)
    e[i] = 1
    return SparsePoly.monomial(XiZ(n), e, 1, ring)


def z(n: int, i: int, ring=QQ) -> SparsePoly:
    e = [0] * (2 * n)
    e[n + i] = 1
    return SparsePoly.monomial(XiZ(n), e, 1, ring)


def D_i(h: SparsePoly, i: int) -> SparsePoly:
    """(xi_i - d/dz_i) h."""
    n = h.space.n
    return h.shift(tuple(1 if k == i else 0 for k in range(2 * n))) - h.derivative(n + i)


def apply_D(hs) -> SparsePoly:
    hs = list(hs)
    if not hs:
        raise ValueError("need at least one component")
    space = hs[0].space
    _check_xiz(hs[0])
    if len(hs) != space.n:
        raise ValueError(f"expected {space.n} components, got {len(hs)}")
    total = SparsePoly.zero(space, hs[0].ring)
    for i, h in enumerate(hs):
        total = total + D_i(h, i)
    return total


def preimage_D(f: SparsePoly, slack: int = SLACK):
    """Bounded search for (h_1..h_n) with apply_D(h) == f.

    Each h_i ranges over polynomials of total degree <= deg f + slack.  A
    None result means "no witness within the bound", never non-membership.
    """
    _check_xiz(f)
    n = f.space.n
    if not f:
        return tuple(SparsePoly.zero(f.space, f.ring) for _ in range(n))
    bound = f.degree() + slack
    monos = [e for d in range(bound + 1) for e in compositions(d, 2 * n)]
    images, cols = [], []
    for i in range(n):
        for e in monos:
            img = D_i(SparsePoly.monomial(f.space, e, 1, f.ring), i)
            images.append(img.as_dict())
            cols.append((i, e))
    x = solve_combination(images, f.as_dict(), QQ)
    if x is None:
        return None
    parts = [{} for _ in range(n)]
    for (i, e), v in zip(cols, x):
        if v:
            parts[i][e] = v
    return tuple(SparsePoly(f.space, p, f.ring) for p in parts)


# ---------------------------------------------------------------- Newton polyhedron


@dataclass
class NewtonPolyhedron:
    points: list
    vertices: list
    summands: dict

    def is_vertex(self, r) -> bool:
        return tuple(r) in self.vertices


def newton_polyhedron(f: SparsePoly) -> NewtonPolyhedron:
    _check_xiz(f)
    if not f:
        raise ZeroPolynomial("the Newton polyhedron of 0 is empty")
    split = multidegree_split(f)
    points = [r for r, _ in split]
    vertices = [r for k, r in enumerate(points) if not lp.in_convex_hull(r, points[:k] + points[k + 1:])]
    return NewtonPolyhedron(points, vertices, dict(split))


def separating_direction(N) -> Optional[tuple]:
    """A direction v >= 0 with sum(v) = 1 and v.r < 0 for every point, or None.

    Solved as: maximize s subject to v.r + s <= 0.  The returned v is the
    max-margin vertex reached by the deterministic simplex.
    """
    points = N.points if isinstance(N, NewtonPolyhedron) else [tuple(r) for r in N]
    if not points:
        return None
    n = len(points[0])
    c = [0] * n + [1]
    A_ub = [list(r) + [1] for r in points]
    b_ub = [0] * len(points)
    A_eq = [[1] * n + [0]]
    res = lp.maximize(c, A_ub, b_ub, A_eq, [1])
    if res.status != "optimal" or res.value <= 0:
        return None
    return tuple(res.x[:n])


# ---------------------------------------------------------------- screening


@dataclass
class CertifiedM1M2:
    v: tuple
    kind = "certified"

    def to_dict(self):
        return {"verdict": self.kind, "v": [str(x) for x in self.v]}


@dataclass
class ExtremalPositive:
    r: tuple
    q: SparsePoly
    profile: M1Report
    kind = "extremal_positive"

    def to_dict(self):
        return {
            "verdict": self.kind,
            "r": list(self.r),
            "q": str(self.q),
            "m": self.profile.first_nonzero_m,
            "value": str(self.profile.first_nonzero),
        }


@dataclass
class Inconclusive:
    reason: str
    kind = "inconclusive"

    def to_dict(self):
        return {"verdict": self.kind, "reason": self.reason}


def screen(f: SparsePoly, m_max: int, term_budget: int = None):
    """Classify f by its Newton polyhedron.

    A separating hyperplane certifies (M1) and (M2).  Otherwise every
    extremal point r >= 0 is tested: its summand z^r q(U) satisfies (M1)
    iff U^r q(U) has vanishing factorial-functional powers, so a nonzero
    power refutes (M1) for f.
    """
    N = newton_polyhedron(f)
    v = separating_direction(N)
    if v is not None:
        return CertifiedM1M2(v)
    tested = []
    for r in N.points:
        if r not in N.vertices or any(x < 0 for x in r):
            continue
        q = summand_q(N.summands[r])
        prof = L_power_profile(q.shift(r), m_max, term_budget)  # xi^r z^r q(U) = U^r q(U)
        if prof.first_nonzero_m is not None:
            return ExtremalPositive(tuple(r), q, prof)
        tested.append(r)
    if tested:
        return Inconclusive(f"extremal summands at {tested} vanish up to m={m_max}")
    return Inconclusive("no separating direction and no extremal point in the closed positive orthant")


def summand_q(summand: SparsePoly) -> SparsePoly:
    """q(U) with summand = z^r q(U); xi^i z^(i+r) contributes U^i."""
    n = summand.space.n
    return SparsePoly(U(n), {e[:n]: c for e, c in summand._terms.items()}, summand.ring)


def m2_probe(f: SparsePoly, g_monomials, m_start: int, m_max: int, term_budget: int = None):
    """Table of (g, m, E(f^m g) == 0) for m in [m_start, m_max]."""
    _check_xiz(f)
    rows = []
    pw = list(powers(f, m_max, term_budget))
    for g in g_monomials:
        for m in range(m_start, m_max + 1):
            rows.append({"g": str(g), "m": m, "zero": in_image_D(pw[m - 1] * g)})
    return rows


__all__ = [
    "E", "in_image_D", "apply_D", "preimage_D", "newton_polyhedron", "separating_direction",
    "screen", "m2_probe", "NewtonPolyhedron", "CertifiedM1M2", "ExtremalPositive", "Inconclusive",
    "summand_q", "xi", "z",
]
