"""Sparse multivariate polynomials over exact coefficient rings.

A ``SparsePoly`` is an immutable map from exponent tuples to nonzero
coefficients, tagged with the variable system it lives in (``VarSpace``) and
its coefficient ring.  Nested rings such as Q[a] or F_p[t1..tk] use
``SparsePoly`` values as coefficients, so one multiplication kernel serves
every ring in the package.

Terms iterate in graded order: lower total degree first, ties broken
lexicographically with the first variable largest.
"""

from __future__ import annotations

import logging
import operator
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDiagonal, PolynomialSyntaxError, RingMismatch

log = logging.getLogger(__name__)

_KINDS = ("U", "XiZ", "Z", "A", "T")


@dataclass(frozen=True)
class VarSpace:
    kind: str
    n: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown variable system {self.kind!r}")
        if self.n < 1:
            raise ValueError("arity must be >= 1")
        if self.kind == "A" and self.n != 1:
            raise ValueError("the A system has the single variable a")

    @property
    def arity(self) -> int:
        return 2 * self.n if self.kind == "XiZ" else self.n

    @property
    def names(self) -> tuple:
        n = self.n
        if self.kind == "U":
            return tuple(f"U{i}" for i in range(1, n + 1))
        if self.kind == "XiZ":
            return tuple(f"x{i}" for i in range(1, n + 1)) + tuple(f"z{i}" for i in range(1, n + 1))
        if self.kind == "Z":
            return tuple(f"z{i}" for i in range(1, n + 1))
        if self.kind == "A":
            return ("a",)
        return tuple(f"t{i}" for i in range(1, n + 1))

    def __str__(self):
        return f"{self.kind}({self.n})"


def U(n: int) -> VarSpace:
    return VarSpace("U", n)


def XiZ(n: int) -> VarSpace:
    return VarSpace("XiZ", n)


def Z(n: int) -> VarSpace:
    return VarSpace("Z", n)


def T(k: int) -> VarSpace:
    return VarSpace("T", k)


A1 = VarSpace("A", 1)


# ---------------------------------------------------------------- rings


class Ring:
    is_field = False

    def clean(self, terms: dict) -> dict:
        """Normalize every coefficient and drop zeros."""
        out = {}
        for e, c in terms.items():
            c = self.normalize(c)
            if c:
                out[e] = c
        return out

    def format_scalar(self, c) -> str:
        return str(c)


@dataclass(frozen=True)
class RationalField(Ring):
    is_field = True

    def normalize(self, c):
        t = type(c)
        if t is int:
            return c
        if t is Fraction:
            return c.numerator if c.denominator == 1 else c
        if isinstance(c, int) and t is not bool:
            return int(c)
        raise RingMismatch(f"{c!r} is not a rational number")

    def clean(self, terms):
        out = {}
        for e, c in terms.items():
            if c:
                if type(c) is Fraction and c.denominator == 1:
                    c = c.numerator
                elif type(c) is not int and type(c) is not Fraction:
                    c = self.normalize(c)
                out[e] = c
        return out

    def inv(self, c):
        return Fraction(1, c) if type(c) is int else 1 / c

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class IntegerRing(Ring):
    def normalize(self, c):
        if type(c) is int:
            return c
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        raise RingMismatch(f"{c!r} is not an integer")

    def clean(self, terms):
        out = {}
        for e, c in terms.items():
            if c:
                out[e] = c if type(c) is int else self.normalize(c)
        return out

    def __str__(self):
        return "ZZ"


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int
    is_field = True

    def normalize(self, c):
        if type(c) is int:
            return c % self.p
        if type(c) is Fraction:
            if c.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        raise RingMismatch(f"{c!r} is not an element of GF({self.p})")

    def clean(self, terms):
        p = self.p
        out = {}
        for e, c in terms.items():
            c = c % p if type(c) is int else self.normalize(c)
            if c:
                out[e] = c
        return out

    def inv(self, c):
        return pow(c, -1, self.p)

    def __str__(self):
        return f"GF({self.p})"


@dataclass(frozen=True)
class PolynomialRing(Ring):
    """Coefficient ring ``base[space]`` whose elements are SparsePoly values."""

    space: VarSpace
    base: Ring

    def normalize(self, c):
        if isinstance(c, SparsePoly):
            if c.space != self.space or c.ring != self.base:
                raise RingMismatch(f"coefficient in {c.ring}[{c.space}] used in {self}")
            return c
        return SparsePoly.constant(self.space, c, self.base)

    def clean(self, terms):
        out = {}
        for e, c in terms.items():
            c = self.normalize(c)
            if c:
                out[e] = c
        return out

    def __str__(self):
        return f"{self.base}[{','.join(self.space.names)}]"


QQ = RationalField()
ZZ = IntegerRing()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def QQ_a() -> PolynomialRing:
    return PolynomialRing(A1, QQ)


def Fp_t(p: int, k: int) -> PolynomialRing:
    return PolynomialRing(T(k), GF(p))


# ---------------------------------------------------------------- polynomials


def order_key(e):
    """Graded-lex sort key: total degree, then first variable largest."""
    return (sum(e), tuple(-x for x in e))


def _add_exp(e1, e2):
    return tuple(map(operator.add, e1, e2))


class SparsePoly:
    __slots__ = ("space", "ring", "_terms", "_sorted", "_hash")

    def __init__(self, space: VarSpace, terms=None, ring: Ring = QQ):
        arity = space.arity
        cleaned = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != arity or any(x < 0 for x in e):
                raise ValueError(f"exponent {e} does not fit {space}")
            cleaned[e] = cleaned[e] + c if e in cleaned else c
        self.space = space
        self.ring = ring
        self._terms = ring.clean(cleaned)
        self._sorted = None
        self._hash = None

    @classmethod
    def _make(cls, space, ring, terms):
        obj = cls.__new__(cls)
        obj.space = space
        obj.ring = ring
        obj._terms = terms
        obj._sorted = None
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, space, ring=QQ):
        return cls._make(space, ring, {})

    @classmethod
    def constant(cls, space, c, ring=QQ):
        return cls(space, {(0,) * space.arity: c}, ring)

    @classmethod
    def monomial(cls, space, exp, c=1, ring=QQ):
        return cls(space, {tuple(exp): c}, ring)

    @classmethod
    def var(cls, space, name, ring=QQ):
        i = space.names.index(name)
        e = [0] * space.arity
        e[i] = 1
        return cls(space, {tuple(e): 1}, ring)

    # access
    def terms(self):
        """(exponent, coefficient) pairs in graded-lex order."""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda kv: order_key(kv[0]))
        return self._sorted

    def as_dict(self) -> dict:
        return dict(self._terms)

    def coeff(self, exp):
        c = self._terms.get(tuple(exp))
        if c is None:
            return self.ring.normalize(0)
        return c

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self):
        return self.coeff((0,) * self.space.arity)

    # comparison
    def __eq__(self, other):
        if isinstance(other, SparsePoly):
            return self.space == other.space and self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            try:
                c = SparsePoly.constant(self.space, other, self.ring)
            except (ValueError, ZeroDivisionError):  # not representable in this ring
                return False
            return self._terms == c._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, self.ring, frozenset(self._terms.items())))
        return self._hash

    # coercion
    def _scalar(self, other):
        """Return ``other`` as a coefficient, or None if it is a polynomial peer."""
        if isinstance(other, SparsePoly):
            if other.space == self.space and other.ring == self.ring:
                return None
            if isinstance(self.ring, PolynomialRing) and other.space == self.ring.space and other.ring == self.ring.base:
                return other
            raise RingMismatch(f"{other.ring}[{other.space}] vs {self.ring}[{self.space}]")
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.normalize(other)
        raise RingMismatch(f"cannot combine {type(other).__name__} with SparsePoly")

    # arithmetic
    def __add__(self, other):
        s = self._scalar(other)
        if s is not None:
            other = SparsePoly._make(self.space, self.ring, self.ring.clean({(0,) * self.space.arity: s}))
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return SparsePoly._make(self.space, self.ring, self.ring.clean(terms))

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._make(self.space, self.ring, self.ring.clean({e: -c for e, c in self._terms.items()}))

    def __sub__(self, other):
        s = self._scalar(other)
        if s is not None:
            return self + (-s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = self.ring.normalize(c)
        if not c:
            return SparsePoly.zero(self.space, self.ring)
        return SparsePoly._make(self.space, self.ring, self.ring.clean({e: v * c for e, v in self._terms.items()}))

    def __mul__(self, other):
        s = self._scalar(other)
        if s is not None:
            return self.scale(s)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        acc = {}
        get = acc.get
        if self.space.arity == 1:
            for (e1,), c1 in a.items():
                for (e2,), c2 in b.items():
                    k = (e1 + e2,)
                    v = get(k)
                    acc[k] = c1 * c2 if v is None else v + c1 * c2
        else:
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    k = _add_exp(e1, e2)
                    v = get(k)
                    acc[k] = c1 * c2 if v is None else v + c1 * c2
        return SparsePoly._make(self.space, self.ring, self.ring.clean(acc))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not self.ring.is_field:
            raise RingMismatch(f"division needs a field, not {self.ring}")
        return self.scale(self.ring.inv(self.ring.normalize(other)))

    def __pow__(self, m: int):
        return pow_poly(self, m)

    def derivative(self, i: int):
        """Partial derivative in the variable at slot ``i``."""
        terms = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                e2 = e[:i] + (k - 1,) + e[i + 1:]
                terms[e2] = c * k
        return SparsePoly._make(self.space, self.ring, self.ring.clean(terms))

    def shift(self, exp):
        """Multiply by the monomial with exponent ``exp``."""
        exp = tuple(exp)
        return SparsePoly._make(self.space, self.ring, {_add_exp(e, exp): c for e, c in self._terms.items()})

    def map_coefficients(self, fn, ring=None):
        ring = self.ring if ring is None else ring
        return SparsePoly._make(self.space, ring, ring.clean({e: fn(c) for e, c in self._terms.items()}))

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r}, {self.space}, {self.ring})"

    def __str__(self):
        return format_poly(self)


def pow_poly(f: SparsePoly, m: int, term_budget: int = None) -> SparsePoly:
    """``f**m`` by iterated multiplication, logging the term count per step."""
    for k, g in enumerate(powers(f, m, term_budget), start=1):
        if k == m:
            return g
    return SparsePoly.constant(f.space, 1, f.ring)


def powers(f: SparsePoly, m_max: int, term_budget: int = None):
    """Yield f, f^2, ..., f^m_max, each obtained from the previous one."""
    from .errors import TermBudgetExceeded

    if m_max < 0:
        raise ValueError("exponent must be >= 0")
    g = None
    for k in range(1, m_max + 1):
        g = f if g is None else g * f
        log.debug("power %d: %d terms", k, len(g))
        if term_budget is not None and len(g) > term_budget:
            raise TermBudgetExceeded(f"f^{k} has {len(g)} terms (budget {term_budget})")
        yield g


# ---------------------------------------------------------------- gradings


def compositions(total: int, k: int):
    """Exponent tuples of length k summing to total, in a fixed order."""
    if k == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, k - 1):
            yield (first,) + rest


def multidegree(exp, n: int):
    """Multi-degree (j - i) of the monomial xi^i z^j on XiZ(n)."""
    return tuple(exp[n + k] - exp[k] for k in range(n))


def multidegree_split(f: SparsePoly):
    """Multi-homogeneous summands of ``f`` as sorted (multi-degree, summand) pairs."""
    if f.space.kind != "XiZ":
        raise RingMismatch("multi-degree is defined on XiZ(n)")
    n = f.space.n
    groups = {}
    for e, c in f._terms.items():
        groups.setdefault(multidegree(e, n), {})[e] = c
    return [(r, SparsePoly._make(f.space, f.ring, groups[r])) for r in sorted(groups)]


def is_multihomogeneous(f: SparsePoly) -> bool:
    n = f.space.n
    return len({multidegree(e, n) for e in f._terms}) <= 1


def to_U(f: SparsePoly) -> SparsePoly:
    """Rewrite a multi-degree-zero polynomial in U_i = xi_i z_i."""
    n = f.space.n
    terms = {}
    for e, c in f._terms.items():
        if e[:n] != e[n:]:
            raise NotDiagonal(f"monomial {e} has multi-degree {multidegree(e, n)}")
        terms[e[:n]] = c
    return SparsePoly._make(U(n), f.ring, terms)


def from_U(q: SparsePoly) -> SparsePoly:
    """Substitute U_i -> xi_i z_i."""
    n = q.space.n
    return SparsePoly._make(XiZ(n), q.ring, {e + e: c for e, c in q._terms.items()})


def convert_space(f: SparsePoly, space: VarSpace) -> SparsePoly:
    """Relabel variables into another system of the same arity (e.g. Z(n) -> U(n))."""
    if space.arity != f.space.arity:
        raise RingMismatch(f"{f.space} and {space} differ in arity")
    return SparsePoly._make(space, f.ring, dict(f._terms))


# ---------------------------------------------------------------- text format


def _fmt_varpows(names, exp):
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _flat_terms(f: SparsePoly):
    """Yield (varpow text, base coefficient) with nested coefficients expanded."""
    names = f.space.names
    if isinstance(f.ring, PolynomialRing):
        inner = f.ring.space.names
        for e, c in f.terms():
            outer = _fmt_varpows(names, e)
            for ie, ic in c.terms():
                vp = "*".join(x for x in (_fmt_varpows(inner, ie), outer) if x)
                yield vp, ic, f.ring.base
    else:
        for e, c in f.terms():
            yield _fmt_varpows(names, e), c, f.ring


def format_poly(f: SparsePoly) -> str:
    out = []
    for vp, c, base in _flat_terms(f):
        neg = c < 0 if not isinstance(base, PrimeField) else False
        mag = -c if neg else c
        if vp:
            body = vp if mag == 1 else f"{base.format_scalar(mag)}*{vp}"
        else:
            body = base.format_scalar(mag)
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


class _Parser:
    def __init__(self, text, space, ring):
        self.text = text
        self.i = 0
        self.space = space
        self.ring = ring
        self.outer = {name: k for k, name in enumerate(space.names)}
        if isinstance(ring, PolynomialRing):
            self.inner = {name: k for k, name in enumerate(ring.space.names)}
            self.base = ring.base
        else:
            self.inner = {}
            self.base = ring

    def error(self, msg, pos=None):
        raise PolynomialSyntaxError(msg, self.text, self.i if pos is None else pos)

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def integer(self):
        self.skip()
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if j == self.i:
            self.error("expected integer")
        return int(self.text[j:self.i])

    def varpow(self):
        self.skip()
        j = self.i
        while self.i < len(self.text) and self.text[self.i].isalpha():
            self.i += 1
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        name = self.text[j:self.i]
        if not name:
            self.error("expected variable")
        if name in self.outer:
            slot = ("o", self.outer[name])
        elif name in self.inner:
            slot = ("i", self.inner[name])
        else:
            self.error(f"unknown variable {name!r}", j)
        k = 1
        if self.peek() == "^":
            self.i += 1
            pos = self.i
            k = self.integer()
            if k < 1:
                self.error("exponent must be positive", pos)
        return slot, k

    def term(self):
        ch = self.peek()
        oe = [0] * self.space.arity
        ie = [0] * (self.ring.space.arity if self.inner else 0)
        coeff = Fraction(1)
        if ch.isdigit():
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.i += 1
                pos = self.i
                den = self.integer()
                if den == 0:
                    self.error("zero denominator", pos)
            coeff = Fraction(num, den)
            if self.peek() != "*":
                return coeff, oe, ie
            self.i += 1
        elif not ch.isalpha():
            self.error("expected coefficient or variable")
        while True:
            (kind, slot), k = self.varpow()
            (oe if kind == "o" else ie)[slot] += k
            if self.peek() != "*":
                break
            self.i += 1
        return coeff, oe, ie

    def parse(self):
        acc = {}
        sign = 1
        if self.peek() and self.peek() in "+-":
            sign = -1 if self.text[self.i] == "-" else 1
            self.i += 1
        while True:
            pos = self.i
            coeff, oe, ie = self.term()
            key = (tuple(oe), tuple(ie))
            try:
                c = self.base.normalize(sign * coeff)
            except (RingMismatch, ZeroDivisionError) as exc:
                self.error(str(exc), pos)
            acc[key] = acc.get(key, 0) + c
            ch = self.peek()
            if not ch:
                break
            if ch not in "+-":
                self.error(f"unexpected {ch!r}")
            sign = -1 if ch == "-" else 1
            self.i += 1
        if self.inner:
            outer = {}
            for (oe, ie), c in acc.items():
                outer.setdefault(oe, {})[ie] = c
            terms = {oe: SparsePoly(self.ring.space, d, self.base) for oe, d in outer.items()}
        else:
            terms = {oe: c for (oe, _), c in acc.items()}
        return SparsePoly(self.space, terms, self.ring)


def parse_poly(text: str, space: VarSpace, ring: Ring = QQ) -> SparsePoly:
    """Parse the textual polynomial grammar (see README) into a SparsePoly."""
    return _Parser(text, space, ring).parse()
