"""Certified special cases of the statement "L(f^m) = 0 for all m >= 1 forces f = 0".

Each prover either exhibits exact evidence that some L(f^m) is nonzero (a
``PrimeCertificate``: a quantity is nonzero because it is nonzero mod p) or
reports a structural reason (two-monomial positivity, gap series).
Coefficients are integers throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .arith import factorial, is_prime, multinomial, next_prime_in_progression
from .errors import ConsistencyError, NotPrime, PreconditionFailed, SearchCapExceeded
from .lfunctional import L, factorial_product, pairing
from .poly import QQ, SparsePoly, U, compositions, pow_poly

PRIME_CAP = 10**4


@dataclass
class PrimeCertificate:
    kind: str
    f: SparsePoly
    p: int
    m: int
    divisor: int
    residue: int
    statement: str = ""

    @property
    def conclusion(self) -> str:
        return f"L(f^{self.m}) != 0"

    def to_dict(self):
        return {
            "kind": self.kind,
            "f": str(self.f),
            "p": self.p,
            "m": self.m,
            "divisor": str(self.divisor),
            "residue": self.residue,
            "statement": self.statement,
            "conclusion": self.conclusion,
        }


def verify_certificate(cert: PrimeCertificate) -> bool:
    """Recompute L(f^m) by polynomial expansion and check the recorded residue."""
    value = L(pow_poly(cert.f, cert.m))
    if value % cert.divisor:
        return False
    res = (value // cert.divisor) % cert.p
    return res == cert.residue and res != 0


def _int_coeffs(f: SparsePoly):
    if f.space.kind != "U":
        raise PreconditionFailed(f"expected a polynomial in U1..Un, got {f.space}")
    for _, c in f.terms():
        if Fraction(c).denominator != 1:
            raise PreconditionFailed(f"coefficient {c} is not an integer")


def _primes(start=2):
    p = start
    while True:
        p = next_prime_in_progression(1, 1, p)
        yield p
        p += 1


# ---------------------------------------------------------------- two monomials


@dataclass
class TwoMonomialResult:
    M1: tuple
    M2: tuple
    h: SparsePoly
    pairing: Fraction

    @property
    def only_trivial(self) -> bool:
        return self.pairing > 0

    def to_dict(self):
        return {"M1": list(self.M1), "M2": list(self.M2), "h": str(self.h),
                "pairing": str(self.pairing), "only_trivial": self.only_trivial}


def _exp(M):
    if isinstance(M, SparsePoly):
        if len(M) != 1:
            raise PreconditionFailed(f"{M} is not a monomial")
        return M.terms()[0][0]
    return tuple(M)


def two_monomial_solve(M1, M2) -> TwoMonomialResult:
    """Solve L(c1 M1 + c2 M2) = L((c1 M1 + c2 M2)^2) = 0.

    The first equation forces f = c1 h with h = M1 - (L1/L2) M2, and then
    L(f^2) = c1^2 <h, h>; positivity of the pairing leaves only c1 = c2 = 0.
    """
    e1, e2 = _exp(M1), _exp(M2)
    if e1 == e2:
        raise PreconditionFailed("monomials must be distinct")
    n = len(e1)
    L1, L2 = factorial_product(e1), factorial_product(e2)
    h = SparsePoly(U(n), {e1: 1, e2: Fraction(-L1, L2)}, QQ)
    return TwoMonomialResult(e1, e2, h, Fraction(pairing(h, h)))


# ---------------------------------------------------------------- monomial times unit


def _min_monomial(f: SparsePoly):
    exps = [e for e, _ in f.terms()]
    alpha = tuple(min(col) for col in zip(*exps))
    if alpha not in f._terms:
        raise PreconditionFailed("no monomial of f divides all the others")
    return alpha


def monomial_unit_certificate(f: SparsePoly, cap: int = PRIME_CAP) -> PrimeCertificate:
    """f = c0 U^alpha + (terms properly divisible by U^alpha).

    For every prime p, L(f^p) / (p alpha)! = c0^p (mod p); the first prime not
    dividing c0 gives a nonzero residue.
    """
    _int_coeffs(f)
    if not f:
        raise PreconditionFailed("f = 0")
    alpha = _min_monomial(f)
    c0 = f._terms[alpha]
    for k, p in enumerate(_primes()):
        if k >= cap:
            break
        if c0 % p == 0:
            continue
        value = L(pow_poly(f, p))
        divisor = factorial_product(tuple(p * a for a in alpha))
        if value % divisor:
            raise ConsistencyError(f"(p alpha)! does not divide L(f^{p})")
        res = (value // divisor) % p
        if res != c0 % p:
            raise ConsistencyError(f"residue {res} != c0 mod {p}")
        return PrimeCertificate("monomial_unit", f, p, p, divisor, res,
                                f"L(f^{p}) / (p*alpha)! = {res} mod {p}")
    raise SearchCapExceeded(f"no prime among the first {cap} fails to divide {c0}")


def n1_certificate(f: SparsePoly) -> PrimeCertificate:
    """One variable: every nonzero f is U^s h with h(0) != 0."""
    if f.space.n != 1:
        raise PreconditionFailed("expected a univariate polynomial")
    return monomial_unit_certificate(f)


# ---------------------------------------------------------------- smallest term


def _smallest_shape(f: SparsePoly, var: int):
    exps = [e for e, _ in f.terms()]
    low = min(e[var] for e in exps)
    at_low = [e for e in exps if e[var] == low]
    if len(at_low) != 1:
        return None
    M0 = at_low[0]
    k1 = M0[var]
    if k1 < 1 or max(M0) > k1:
        return None
    return M0, k1


def smallest_term_certificate(f: SparsePoly, var: Optional[int] = None, m: Optional[int] = None,
                              cap: int = PRIME_CAP) -> PrimeCertificate:
    """f = c M0 + sum c_i M_i with M0 = U^k, k_var >= 1 maximal in k, U_var^(k_var+1) | M_i.

    For a prime p = m k_var + 1 every term of L(f^m) other than L(M0^m) is
    divisible by p, while p does not divide L(M0^m) = prod (m k_j)!.
    """
    _int_coeffs(f)
    if not f:
        raise PreconditionFailed("f = 0")
    candidates = [var] if var is not None else range(f.space.n)
    shape = None
    for j in candidates:
        shape = _smallest_shape(f, j)
        if shape:
            var = j
            break
    if shape is None:
        raise PreconditionFailed("f does not have the smallest-term shape")
    M0, k1 = shape
    c = f._terms[M0]
    if m is not None:
        p = m * k1 + 1
        if not is_prime(p) or c % p == 0:
            raise PreconditionFailed(f"p = {p} is not a usable prime")
        return _smallest_at(f, M0, c, m, p)
    p = k1
    for _ in range(cap):
        p = next_prime_in_progression(1, k1, p + 1)
        if c % p:
            return _smallest_at(f, M0, c, (p - 1) // k1, p)
    raise SearchCapExceeded("no usable prime found")


def _smallest_at(f, M0, c, m, p):
    value = L(pow_poly(f, m))
    res = value % p
    main = pow(c, m, p) * factorial_product(tuple(m * k for k in M0)) % p
    if res != main or res == 0:
        raise ConsistencyError(f"L(f^{m}) = {res} mod {p}, expected {main}")
    return PrimeCertificate("smallest_term", f, p, m, 1, res, f"L(f^{m}) = {res} mod {p}, p = {m}*k1 + 1")


# ---------------------------------------------------------------- symmetric functions


def complete_homogeneous(c, m: int):
    """h_m(c) = sum over |i| = m of prod c_k^(i_k), by recursion on the variables."""
    if m < 0:
        raise ValueError("m must be >= 0")
    row = [Fraction(1)] + [Fraction(0)] * m  # h_j of the empty set
    for ck in c:
        ck = Fraction(ck)
        new = []
        for j in range(m + 1):
            new.append(row[j] + (ck * new[j - 1] if j else 0))
        row = new
    return QQ.normalize(row[m])


def elementary_symmetric(c):
    """[e_0, ..., e_n] of the values c."""
    e = [Fraction(1)]
    for ck in c:
        ck = Fraction(ck)
        e = [a + ck * b for a, b in zip(e + [Fraction(0)], [Fraction(0)] + e)]
    return [QQ.normalize(x) for x in e]


def h_from_e(e, N: int):
    """h_0..h_N from e_0..e_n via P(T) S(T) = 1 with S = sum (-1)^k e_k T^k."""
    h = [Fraction(1)]
    for k in range(1, N + 1):
        acc = Fraction(0)
        for i in range(1, min(k, len(e) - 1) + 1):
            acc += (-1) ** (i - 1) * e[i] * h[k - i]
        h.append(acc)
    return [QQ.normalize(x) for x in h]


def e_from_h(h, n: int):
    """e_0..e_n from h_0..h_n (the same identity solved the other way)."""
    e = [Fraction(1)]
    for k in range(1, n + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * h[i] * e[k - i]
        e.append(acc)
    return [QQ.normalize(x) for x in e]


def newton_convert(values, N: int, direction: str = "e->h"):
    if direction == "e->h":
        return h_from_e(values, N)
    if direction == "h->e":
        return e_from_h(values, N)
    raise ValueError("direction must be 'e->h' or 'h->e'")


# ---------------------------------------------------------------- gap series


@dataclass
class GapReport:
    S: list
    r: int
    N: int
    P: list = field(default_factory=list)
    first_hit: Optional[tuple] = None

    @property
    def is_one(self) -> bool:
        return all(x == 0 for x in self.S[1:])

    @property
    def flagged(self) -> bool:
        """A nontrivial S with no nonzero a_(mr) up to N: either N is too small or a bug."""
        return not self.is_one and self.first_hit is None

    def check_inverse(self) -> bool:
        for k in range(self.N + 1):
            acc = sum(self.S[j] * self.P[k - j] for j in range(min(k, len(self.S) - 1) + 1))
            if acc != (1 if k == 0 else 0):
                return False
        return True

    def to_dict(self):
        return {
            "S": [str(x) for x in self.S],
            "r": self.r,
            "N": self.N,
            "first_hit": None if self.first_hit is None else [self.first_hit[0], str(self.first_hit[1])],
            "flagged": self.flagged,
        }


def _coeff_list(S):
    if isinstance(S, SparsePoly):
        if S.space.arity != 1:
            raise PreconditionFailed("S must be univariate")
        d = max(S.degree(), 0)
        return [QQ.normalize(Fraction(S.coeff((k,)))) for k in range(d + 1)]
    return [QQ.normalize(Fraction(x)) for x in S]


def gap_series(S, r: int, N: Optional[int] = None) -> GapReport:
    """Truncated inverse P = 1/S mod T^(N+1) and the first nonzero a_(mr)."""
    S = _coeff_list(S)
    while len(S) > 1 and S[-1] == 0:
        S.pop()
    if not S or S[0] != 1:
        raise PreconditionFailed("S(0) must be 1")
    if r < 1:
        raise PreconditionFailed("r must be >= 1")
    N = 10 * r * len(S) if N is None else N
    if N < r:
        raise PreconditionFailed("N must be >= r")
    P = [Fraction(1)]
    for k in range(1, N + 1):
        P.append(-sum((S[j] * P[k - j] for j in range(1, min(k, len(S) - 1) + 1)), Fraction(0)))
    P = [QQ.normalize(x) for x in P]
    rep = GapReport(S, r, N, P)
    for mr in range(r, N + 1, r):
        if P[mr] != 0:
            rep.first_hit = (mr // r, P[mr])
            break
    return rep


# ---------------------------------------------------------------- linear forms


@dataclass
class LinearFormReport:
    c: list
    r: int
    rows: list = field(default_factory=list)  # (m, L((c.U)^(rm)))
    gap: Optional[GapReport] = None

    @property
    def first_nonzero_m(self):
        return next((m for m, v in self.rows if v != 0), None)

    @property
    def nonzero_witnessed(self) -> bool:
        return self.first_nonzero_m is not None or (self.gap is not None and self.gap.first_hit is not None)

    def to_dict(self):
        return {
            "c": [str(x) for x in self.c],
            "r": self.r,
            "values": [[m, str(v)] for m, v in self.rows],
            "first_nonzero_m": self.first_nonzero_m,
            "gap": None if self.gap is None else self.gap.to_dict(),
        }


def linear_form(c) -> SparsePoly:
    n = len(c)
    return SparsePoly(U(n), {tuple(1 if k == i else 0 for k in range(n)): Fraction(ci) for i, ci in enumerate(c)}, QQ)


def linear_form_power_test(c, r: int, m_max: int) -> LinearFormReport:
    """L((c.U)^(rm)) by expansion and as (rm)! h_(rm)(c); the two must agree."""
    if r < 1:
        raise PreconditionFailed("r must be >= 1")
    c = [QQ.normalize(Fraction(x)) for x in c]
    g = linear_form(c)
    rep = LinearFormReport(c, r)
    for m in range(1, m_max + 1):
        direct = L(pow_poly(g, r * m))
        via_h = factorial(r * m) * complete_homogeneous(c, r * m)
        if direct != via_h:
            raise ConsistencyError(f"expansion {direct} != (rm)! h_rm = {via_h} at m = {m}")
        rep.rows.append((m, direct))
    if any(c):
        S = [(-1) ** k * ek for k, ek in enumerate(elementary_symmetric(c))]
        rep.gap = gap_series(S, r)
        if rep.gap.first_hit is None:
            raise ConsistencyError(f"no nonzero h_(mr) found for c = {c} up to N = {rep.gap.N}")
    return rep


# ---------------------------------------------------------------- Wilson congruence


def congruence_check(p: int) -> bool:
    """(m!)^3 / ((i!)^2 (m - 2i)!) = C(r, i) (-4)^i (mod p), m = p - 1, r = m / 2, all i <= r."""
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    m = p - 1
    r = m // 2
    mf = factorial(m)
    for i in range(r + 1):
        lhs = mf**3 // (factorial(i) ** 2 * factorial(m - 2 * i))
        if (lhs - math.comb(r, i) * (-4) ** i) % p:
            return False
    return True


# ---------------------------------------------------------------- binary quadratic forms


def quadratic_L(c20: int, c11: int, c02: int, m: int) -> int:
    """L(f^m) for f = c20 U1^2 + c11 U1 U2 + c02 U2^2 by the trinomial expansion."""
    total = 0
    for i in range(m + 1):
        for k in range(m - i + 1):
            j = m - i - k
            total += (multinomial(m, (i, j, k)) * c20**i * c11**j * c02**k
                      * factorial(2 * i + j) * factorial(j + 2 * k))
    return total


def quadratic_form(c20, c11, c02) -> SparsePoly:
    return SparsePoly(U(2), {(2, 0): c20, (1, 1): c11, (0, 2): c02}, QQ)


@dataclass
class QuadraticVerdict:
    kind: str  # "certificate", "square" or "zero"
    discriminant: int
    certificate: Optional[PrimeCertificate] = None
    scale: Optional[Fraction] = None
    linear: Optional[LinearFormReport] = None

    def to_dict(self):
        out = {"verdict": self.kind, "discriminant": self.discriminant}
        if self.certificate:
            out["certificate"] = self.certificate.to_dict()
        if self.linear:
            out["scale"] = str(self.scale)
            out["linear"] = self.linear.to_dict()
        return out


def quadratic_binary_test(c20: int, c11: int, c02: int, m_max: int = 4, cap: int = PRIME_CAP) -> QuadraticVerdict:
    """Nonzero discriminant d: the first odd prime p = 2r + 1 not dividing d has
    L(f^(2r)) = d^r (mod p).  Zero discriminant: f = lam (U1 + beta U2)^2 (or
    lam U2^2) with rational lam, beta, handled as a power of a linear form."""
    for c in (c20, c11, c02):
        if Fraction(c).denominator != 1:
            raise PreconditionFailed("coefficients must be integers")
    c20, c11, c02 = int(c20), int(c11), int(c02)
    d = c11 * c11 - 4 * c20 * c02
    if c20 == c11 == c02 == 0:
        return QuadraticVerdict("zero", 0)
    f = quadratic_form(c20, c11, c02)
    if d:
        for k, p in enumerate(_primes(3)):
            if k >= cap:
                break
            if d % p == 0:
                continue
            r = (p - 1) // 2
            value = quadratic_L(c20, c11, c02, 2 * r)
            res = value % p
            if res != pow(d, r, p) or res == 0:
                raise ConsistencyError(f"L(f^{2 * r}) = {res} mod {p}, expected d^r = {pow(d, r, p)}")
            cert = PrimeCertificate("quadratic", f, p, 2 * r, 1, res, f"L(f^{2 * r}) = d^{r} = {res} mod {p}")
            return QuadraticVerdict("certificate", d, cert)
        raise SearchCapExceeded("no odd prime avoids the discriminant")
    if c20:
        lam, form = Fraction(c20), [1, Fraction(c11, 2 * c20)]
    else:
        lam, form = Fraction(c02), [0, 1]
    lin = linear_form_power_test(form, 2, m_max)
    for m, v in lin.rows:
        if L(pow_poly(f, m)) != lam**m * v:
            raise ConsistencyError(f"f != lam * (linear form)^2 at m = {m}")
    return QuadraticVerdict("square", 0, scale=lam, linear=lin)


# ---------------------------------------------------------------- power sums


def power_sum(c, d: int) -> SparsePoly:
    n = len(c)
    return SparsePoly(U(n), {tuple(d if k == i else 0 for k in range(n)): ci for i, ci in enumerate(c)}, QQ)


def power_sum_certificate(c, d: int, m: Optional[int] = None, m_cap: int = PRIME_CAP) -> PrimeCertificate:
    """f = sum c_i U_i^d, d >= 2: with p = (m + 1) d - 1 prime, p divides every
    term of L(f^(nm)) / (nm)! except the one with all k_i = m."""
    c = list(c)
    if d < 2:
        raise PreconditionFailed("d must be >= 2 (d = 1 is a linear form)")
    if any(Fraction(ci).denominator != 1 for ci in c):
        raise PreconditionFailed("coefficients must be integers")
    c = [int(ci) for ci in c]
    if any(ci == 0 for ci in c):
        raise PreconditionFailed("all coefficients must be nonzero")
    prod_c = math.prod(c)
    ms = [m] if m is not None else range(1, m_cap + 1)
    for mm in ms:
        p = (mm + 1) * d - 1
        if not is_prime(p) or prod_c % p == 0:
            if m is not None:
                raise PreconditionFailed(f"p = {p} is not a usable prime")
            continue
        return _power_sum_at(c, d, mm, p)
    raise SearchCapExceeded(f"no usable m <= {m_cap}")


def _power_sum_at(c, d, m, p):
    n = len(c)
    nm = n * m
    ratio = [factorial(k * d) // factorial(k) for k in range(nm + 1)]
    total = 0
    for ks in compositions(nm, n):
        term = 1
        for k, ck in zip(ks, c):
            term *= ratio[k] * ck**k
        special = all(k == m for k in ks)
        if special and term % p == 0:
            raise ConsistencyError("special term divisible by p")
        if not special and term % p:
            raise ConsistencyError(f"term {ks} not divisible by p = {p}")
        total += term
    value = factorial(nm) * total
    divisor = factorial(nm) if p <= nm else 1
    res = (value // divisor) % p
    if res == 0:
        raise ConsistencyError("zero residue")
    f = power_sum(c, d)
    return PrimeCertificate("power_sum", f, p, nm, divisor, res,
                            f"L(f^{nm}) / {divisor} = {res} mod {p}, p = ({m}+1)*{d} - 1")


__all__ = [
    "PrimeCertificate", "verify_certificate", "two_monomial_solve", "monomial_unit_certificate",
    "n1_certificate", "smallest_term_certificate", "complete_homogeneous", "elementary_symmetric",
    "newton_convert", "gap_series", "GapReport", "linear_form_power_test", "congruence_check",
    "quadratic_binary_test", "power_sum_certificate",
]
