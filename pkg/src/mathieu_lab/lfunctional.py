"""The factorial functional L(U^l) = l_1! ... l_n! and its power profiles."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .arith import factorial
from .errors import RingMismatch
from .poly import QQ, ZZ, SparsePoly, powers

TERM_BUDGET = 10**7


@lru_cache(maxsize=1 << 16)
def factorial_product(exp) -> int:
    out = 1
    for k in exp:
        if k > 1:
            out *= factorial(k)
    return out


def _check(f: SparsePoly):
    if f.ring not in (QQ, ZZ) or f.space.kind not in ("U", "Z"):
        raise RingMismatch(f"L is defined on Q[U] or Q[z], got {f.ring}[{f.space}]")


def L(f: SparsePoly):
    """Exact value of the factorial functional; an int whenever it is integral."""
    _check(f)
    total = 0
    for e, c in f._terms.items():
        total += c * factorial_product(e)
    return QQ.normalize(total)


def pairing(f: SparsePoly, g: SparsePoly):
    """The bilinear form <f, g> = L(f g); positive definite on Q[U]."""
    _check(f)
    _check(g)
    return L(f * g)


@dataclass
class M1Report:
    f: SparsePoly
    m_max: int
    values: list = field(default_factory=list)
    first_nonzero_m: Optional[int] = None

    @property
    def m_stop(self) -> int:
        return self.first_nonzero_m if self.first_nonzero_m is not None else self.m_max

    @property
    def m1_depth(self) -> int:
        """Largest m such that L(f^i) = 0 for every i <= m."""
        return self.m_stop - 1 if self.first_nonzero_m is not None else self.m_max

    @property
    def first_nonzero(self):
        return None if self.first_nonzero_m is None else self.values[-1]

    def to_dict(self):
        return {
            "f": str(self.f),
            "m_max": self.m_max,
            "values": [str(v) for v in self.values],
            "first_nonzero_m": self.first_nonzero_m,
        }


def L_power_profile(f: SparsePoly, m_max: int, term_budget: int = None) -> M1Report:
    """L(f^m) for m = 1..m_max, stopping at the first nonzero value."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    _check(f)
    report = M1Report(f, m_max)
    if not f:
        report.values = [0] * m_max
        return report
    budget = TERM_BUDGET if term_budget is None else term_budget
    for m, g in enumerate(powers(f, m_max, budget), start=1):
        v = L(g)
        report.values.append(v)
        if v != 0:
            report.first_nonzero_m = m
            break
    return report


def random_poly(rng, n: int, max_deg: int, coeff_bound: int = 9, max_terms: int = None, space=None):
    """Random nonzero polynomial over Q[U1..Un] with integer coefficients."""
    from itertools import product

    from .poly import U

    space = space or U(n)
    exps = [e for e in product(range(max_deg + 1), repeat=n) if sum(e) <= max_deg]
    k = rng.randint(1, max_terms or len(exps))
    while True:
        terms = {e: rng.randint(-coeff_bound, coeff_bound) for e in rng.sample(exps, min(k, len(exps)))}
        f = SparsePoly(space, terms, QQ)
        if f:
            return f


__all__ = ["L", "L_power_profile", "M1Report", "pairing", "factorial_product", "random_poly"]
