"""Exact integer and rational helpers.

Python ``int`` is the arbitrary precision integer and ``fractions.Fraction``
the reduced rational; this module adds the number theory on top of them.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from .errors import NotCoprime, NotPrime, PartsMismatch, SearchCapExceeded

INF = math.inf  # valuation of zero; saturates under + and compares above every int

FACTORIAL_CAP = 10**5
TRIAL_DIVISION_CAP = 10**7
PROGRESSION_CAP = 10**4

_fact_table = [1]
_fact_lock = threading.Lock()


def factorial(k: int) -> int:
    """Exact ``k!``; values below ``FACTORIAL_CAP`` are memoized."""
    if k < 0:
        raise ValueError("factorial of a negative number")
    if k < len(_fact_table):
        return _fact_table[k]
    if k >= FACTORIAL_CAP:
        return math.factorial(k)
    with _fact_lock:
        acc = _fact_table[-1]
        for i in range(len(_fact_table), k + 1):
            acc *= i
            _fact_table.append(acc)
    return _fact_table[k]


def multinomial(m: int, parts) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts) or sum(parts) != m:
        raise PartsMismatch(f"parts {parts} do not sum to {m}")
    out = 1
    acc = 0
    # product of binomials avoids the large intermediate m!
    for p in parts:
        acc += p
        out *= math.comb(acc, p)
    return out


# Deterministic for n < 3.3e24 (Sorenson & Webster); covers every n < 2**64.
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = MR_WITNESSES


def _miller_rabin(n: int) -> bool:
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test.

    Exact Miller-Rabin with a fixed witness set below 2**64. Above that, trial
    division up to ``TRIAL_DIVISION_CAP``; a number with no factor found and
    ``isqrt(n)`` beyond the cap raises ``SearchCapExceeded``.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 2**64:
        return _miller_rabin(n)
    root = math.isqrt(n)
    limit = min(root, TRIAL_DIVISION_CAP)
    q = 41
    while q <= limit:
        if n % q == 0 or n % (q + 2) == 0:
            return False
        q += 6
    if root <= TRIAL_DIVISION_CAP:
        return True
    raise SearchCapExceeded(f"cannot certify primality of {n} above 2**64 within trial cap")


def next_prime_in_progression(a: int, b: int, lower: int, cap: int = None) -> int:
    """Smallest prime p >= lower with p = a (mod b)."""
    if b <= 0:
        raise ValueError("modulus must be positive")
    if math.gcd(a, b) != 1:
        raise NotCoprime(f"gcd({a}, {b}) != 1")
    cap = PROGRESSION_CAP if cap is None else cap
    start = max(lower, 2)
    x = start + (a - start) % b
    for _ in range(cap):
        if is_prime(x):
            return x
        x += b
    raise SearchCapExceeded(f"no prime = {a} mod {b} among {cap} candidates from {start}")


def vp(x, p: int):
    """p-adic valuation of a rational; ``INF`` for zero."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


def _int_vp(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def legendre(k: int, p: int) -> int:
    """v_p(k!) by Legendre's formula."""
    total = 0
    q = p
    while q <= k:
        total += k // q
        q *= p
    return total


def primes_below(limit: int):
    return [q for q in range(2, limit) if is_prime(q)]
