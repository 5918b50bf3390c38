from fractions import Fraction
from itertools import permutations

import pytest
import sympy
from hypothesis import given, strategies as st

from mathieu_lab.arith import (
    INF, factorial, is_prime, legendre, multinomial, next_prime_in_progression, primes_below, vp,
)
from mathieu_lab.errors import NotCoprime, NotPrime, PartsMismatch, SearchCapExceeded
from mathieu_lab.poly import compositions


def test_factorial_examples():
    assert factorial(0) == 1
    assert factorial(5) == 120
    assert factorial(2) * factorial(3) == 12


def test_factorial_recurrence():
    for k in range(300):
        assert factorial(k + 1) == (k + 1) * factorial(k)


def test_factorial_rejects_negative():
    with pytest.raises(ValueError):
        factorial(-1)


def test_multinomial_examples():
    assert multinomial(2, [1, 1]) == 2
    assert multinomial(4, [2, 1, 1]) == 12
    assert multinomial(7, [7]) == 1
    with pytest.raises(PartsMismatch):
        multinomial(3, [1, 1])


def test_multinomial_symmetry_and_sum():
    for parts in ([3, 1, 2], [0, 4, 1], [2, 2]):
        vals = {multinomial(sum(parts), list(p)) for p in permutations(parts)}
        assert len(vals) == 1
    for m in range(7):
        for d in range(1, 7):
            assert sum(multinomial(m, c) for c in compositions(m, d)) == d**m


def test_is_prime_examples():
    assert is_prime(2)
    assert not is_prime(1)
    assert not is_prime(0)
    assert not is_prime(35)
    # strong pseudoprimes to several small bases
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)
    assert is_prime(2**61 - 1)
    assert is_prime(1000000000039)


def test_is_prime_matches_sympy_small():
    for n in range(2000):
        assert is_prime(n) == sympy.isprime(n), n


@given(st.integers(min_value=0, max_value=2**64 - 1))
def test_is_prime_matches_sympy_word(n):
    assert is_prime(n) == sympy.isprime(n)


def test_is_prime_above_word_size():
    # trial division finds small factors; otherwise the cap is reported, never guessed
    assert not is_prime(3 * (2**64 + 13))
    assert not is_prime(1000003 * (2**61 - 1))
    with pytest.raises(SearchCapExceeded):
        is_prime(2**64 + 13)
    with pytest.raises(SearchCapExceeded):
        is_prime((2**61 - 1) * (2**89 - 1))


def test_next_prime_in_progression():
    assert next_prime_in_progression(1, 2, 3) == 3
    assert next_prime_in_progression(1, 4, 6) == 13
    assert next_prime_in_progression(1, 2, 4) == 5
    with pytest.raises(NotCoprime):
        next_prime_in_progression(2, 4, 1)
    with pytest.raises(SearchCapExceeded):
        next_prime_in_progression(1, 2, 10**6, cap=1)


def test_vp_examples():
    assert vp(120, 5) == 1
    assert vp(Fraction(3, 4), 2) == -2
    assert vp(0, 7) == INF
    with pytest.raises(NotPrime):
        vp(12, 4)


@given(st.integers(-10**9, 10**9).filter(bool), st.integers(-10**9, 10**9).filter(bool),
       st.sampled_from([2, 3, 5, 7, 11]))
def test_vp_multiplicative(x, y, p):
    assert vp(x * y, p) == vp(x, p) + vp(y, p)
    assert vp(Fraction(x, y), p) == vp(x, p) - vp(y, p)


def test_vp_factorial_legendre():
    for p in (2, 3, 5, 7):
        for k in range(0, 80, 7):
            direct = 0
            n = factorial(k)
            while n % p == 0:
                n //= p
                direct += 1
            assert vp(factorial(k), p) == legendre(k, p) == direct


def test_primes_below():
    assert primes_below(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_below(2) == []
