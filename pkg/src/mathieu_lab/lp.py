"""Exact rational linear programming (two-phase simplex, Bland's rule).

Floating point hull codes are avoided entirely: every pivot is done in
``Fraction`` arithmetic and the anti-cycling rule makes the pivot sequence,
and hence the returned vertex, deterministic.
"""

from __future__ import annotations

from fractions import Fraction


class LPResult:
    __slots__ = ("status", "x", "value")

    def __init__(self, status, x=None, value=None):
        self.status = status  # "optimal", "infeasible" or "unbounded"
        self.x = x
        self.value = value

    def __repr__(self):
        return f"LPResult({self.status}, x={self.x}, value={self.value})"


def _pivot(tab, cost, basis, r, c):
    row = tab[r]
    inv = 1 / row[c]
    tab[r] = row = [v * inv for v in row]
    for i, other in enumerate(tab):
        if i != r and other[c]:
            f = other[c]
            tab[i] = [a - f * b for a, b in zip(other, row)]
    if cost[c]:
        f = cost[c]
        cost[:] = [a - f * b for a, b in zip(cost, row)]
    basis[r] = c


def _run(tab, cost, basis, allowed):
    """Maximize; ``cost`` holds reduced costs with -objective value last."""
    while True:
        enter = next((j for j in allowed if cost[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(tab):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, cost, basis, best[1], enter)


def maximize(c, A_ub=(), b_ub=(), A_eq=(), b_eq=()):
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``, ``x >= 0``."""
    nv = len(c)
    rows, rhs, slack_sign = [], [], []
    for a, b in zip(A_ub, b_ub):
        rows.append([Fraction(v) for v in a])
        rhs.append(Fraction(b))
        slack_sign.append(1)
    for a, b in zip(A_eq, b_eq):
        rows.append([Fraction(v) for v in a])
        rhs.append(Fraction(b))
        slack_sign.append(0)
    m = len(rows)
    ns = sum(1 for s in slack_sign if s)
    width = nv + ns + m  # originals, slacks, artificials
    tab = []
    k = 0
    for i in range(m):
        row = rows[i] + [Fraction(0)] * (ns + m)
        if slack_sign[i]:
            row[nv + k] = Fraction(1)
            k += 1
        b = rhs[i]
        if b < 0:
            row = [-v for v in row]
            b = -b
        row[nv + ns + i] = Fraction(1)
        tab.append(row + [b])
    basis = [nv + ns + i for i in range(m)]

    # phase 1: maximize -(sum of artificials)
    cost = [Fraction(0)] * (width + 1)
    for row in tab:
        for j in range(nv + ns):
            cost[j] += row[j]
        cost[-1] += row[-1]
    status = _run(tab, cost, basis, range(nv + ns))
    if cost[-1] != 0:
        return LPResult("infeasible")

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab):
        if basis[i] >= nv + ns:
            col = next((j for j in range(nv + ns) if tab[i][j] != 0), None)
            if col is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, [Fraction(0)] * (width + 1), basis, i, col)
        i += 1

    cost = [Fraction(0)] * (width + 1)
    for j in range(nv):
        cost[j] = Fraction(c[j])
    for i, bj in enumerate(basis):
        if cost[bj]:
            f = cost[bj]
            cost = [a - f * b for a, b in zip(cost, tab[i])]
    status = _run(tab, cost, basis, range(nv + ns))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * nv
    for i, bj in enumerate(basis):
        if bj < nv:
            x[bj] = tab[i][-1]
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult("optimal", x, value)


def feasible(A_eq, b_eq, A_ub=(), b_ub=()):
    """Nonnegative solution of the system, or None."""
    nv = len(A_eq[0]) if A_eq else len(A_ub[0])
    res = maximize([0] * nv, A_ub, b_ub, A_eq, b_eq)
    return res.x if res.status == "optimal" else None


def in_convex_hull(point, others) -> bool:
    """Whether ``point`` is a convex combination of ``others``."""
    if not others:
        return False
    dim = len(point)
    A_eq = [[q[k] for q in others] for k in range(dim)] + [[1] * len(others)]
    b_eq = list(point) + [1]
    return feasible(A_eq, b_eq) is not None
