"""Exact sparse Gaussian elimination over Q or F_p.

Rows are dicts ``{column: value}``.  Pivots are chosen on the smallest
column index, so results are deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import QQ, PrimeField


def _ops(field):
    if isinstance(field, PrimeField):
        p = field.p
        return (lambda x: x % p), (lambda x: pow(x, -1, p))
    return QQ.normalize, (lambda x: Fraction(1, x) if type(x) is int else 1 / x)


class Echelon:
    """Incrementally maintained row-echelon system ``A x = b``."""

    def __init__(self, field=QQ):
        self.field = field
        self.norm, self.inv = _ops(field)
        self.rows = []  # (pivot column, row dict, rhs) in insertion order
        self.pivot_index = {}
        self.consistent = True

    def reduce(self, row: dict, rhs=0):
        norm = self.norm
        row = {c: norm(v) for c, v in row.items() if v}
        row = {c: v for c, v in row.items() if v}
        rhs = norm(rhs)
        for piv, prow, prhs in self.rows:
            f = row.get(piv)
            if not f:
                continue
            for c, v in prow.items():
                nv = norm(row.get(c, 0) - f * v)
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            rhs = norm(rhs - f * prhs)
        return row, rhs

    def add(self, row: dict, rhs=0) -> bool:
        """Add an equation; returns False if it made the system inconsistent."""
        row, rhs = self.reduce(row, rhs)
        if not row:
            if rhs:
                self.consistent = False
            return not rhs
        piv = min(row)
        s = self.inv(row[piv])
        row = {c: self.norm(v * s) for c, v in row.items()}
        self.pivot_index[piv] = len(self.rows)
        self.rows.append((piv, row, self.norm(rhs * s)))
        return True

    def in_span(self, row: dict) -> bool:
        """Whether ``row`` is a combination of the rows added so far."""
        reduced, _ = self.reduce(row, 0)
        return not reduced

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solution(self):
        """One solution (free variables set to 0), or None if inconsistent."""
        if not self.consistent:
            return None
        x = {}
        for piv, row, rhs in reversed(self.rows):
            acc = rhs
            for c, v in row.items():
                if c != piv:
                    acc -= v * x.get(c, 0)
            x[piv] = self.norm(acc)
        return x


def solve_combination(images, target: dict, field=QQ):
    """Coefficients ``x`` with ``sum_j x_j * images[j] == target``, or None.

    ``images`` and ``target`` are dicts keyed by any sortable monomial key;
    one equation is formed per key.
    """
    keys = set(target)
    for img in images:
        keys.update(img)
    ech = Echelon(field)
    for key in sorted(keys):
        row = {j: img[key] for j, img in enumerate(images) if img.get(key)}
        if not ech.add(row, target.get(key, 0)):
            return None
    x = ech.solution()
    return [x.get(j, 0) for j in range(len(images))]
