"""Exact arithmetic, prime generation, prime-set densities."""

from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, strategies as st

from bfreekit.arith import (
    PrimeSet,
    Rational,
    euler_complement,
    euler_density,
    format_rational,
    lcm_fold,
    next_prime_above,
    parse_rational,
    primes_in_range,
)
from bfreekit.errors import CapacityExceeded
from conftest import trial_division_primes


def test_primes_in_range_textbook():
    assert primes_in_range(2, 10) == [2, 3, 5, 7]
    assert primes_in_range(11, 11) == [11]
    assert primes_in_range(90, 100) == [97]  # trial division oracle agrees below


def test_primes_in_range_against_trial_division():
    for lo, hi in [(2, 200), (500, 700), (9973, 10100), (2, 3)]:
        assert primes_in_range(lo, hi) == trial_division_primes(lo, hi)


def test_primes_capacity_is_loud():
    with pytest.raises(CapacityExceeded) as err:
        primes_in_range(2, 100, cap=50)
    assert err.value.needed == 100 and err.value.cap == 50


def test_sieve_cap_env_override(monkeypatch):
    monkeypatch.setenv("BFREEKIT_SIEVE_CAP", "10")
    with pytest.raises(CapacityExceeded):
        primes_in_range(2, 100)
    monkeypatch.delenv("BFREEKIT_SIEVE_CAP")
    assert primes_in_range(2, 100)[-1] == 97


def test_euler_density_values():
    assert euler_density([2]) == Fraction(1, 2)
    assert euler_density([3, 5]) == Fraction(7, 15)  # 1 - (2/3)(4/5)
    assert euler_density([2, 3, 5]) == Fraction(11, 15)  # brute: 22 of 30


def test_euler_density_equals_period_count_all_subsets():
    # all nonempty subsets of the first five primes, counted over one period
    primes = [2, 3, 5, 7, 11]
    for bits in range(1, 32):
        P = [p for i, p in enumerate(primes) if bits >> i & 1]
        period = 1
        for p in P:
            period *= p
        hits = sum(1 for n in range(1, period + 1) if any(n % p == 0 for p in P))
        assert euler_density(P) == Fraction(hits, period)


def test_euler_density_empty_rejected():
    with pytest.raises(ValueError):
        euler_density([])


def test_lcm_fold():
    assert lcm_fold([8, 30]) == 120
    assert lcm_fold([6]) == 6
    assert lcm_fold([4, 6, 10]) == 60


@given(st.lists(st.integers(min_value=1, max_value=500), min_size=1, max_size=8))
def test_lcm_fold_properties(xs):
    value = lcm_fold(xs)
    prod = 1
    for x in xs:
        assert value % x == 0
        prod *= x
    assert prod % value == 0
    assert value == lcm(*xs)


@given(
    st.fractions(max_denominator=10**6),
    st.fractions(max_denominator=10**6),
    st.fractions(max_denominator=10**6),
)
def test_rational_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    if c != 0:
        assert (a / c) * c == a


@given(st.integers(), st.integers(min_value=1, max_value=10**9))
def test_rational_always_reduced(num, den):
    from math import gcd

    q = Rational(num, den)
    assert q.denominator > 0
    assert gcd(abs(q.numerator), q.denominator) == 1
    assert Rational(q.numerator, q.denominator) == q  # normalization idempotent


def test_rational_round_trip_strings():
    for s in ["3/20", "-7/4", "0/1", "12345678901234567890/7"]:
        assert format_rational(parse_rational(s)) == s
    assert parse_rational("5") == Fraction(5)


def test_primeset_validation():
    with pytest.raises(ValueError):
        PrimeSet(extras=(4,))
    with pytest.raises(ValueError):
        PrimeSet(intervals=((2, 10), (5, 20)))
    with pytest.raises(ValueError):
        PrimeSet(intervals=((2, 10),), extras=(7,))


def test_primeset_enumeration_and_counts():
    ps = PrimeSet(intervals=((2, 13), (30, 40)), extras=(17, 23, 101))
    listed = ps.to_list()
    assert listed == [2, 3, 5, 7, 11, 13, 17, 23, 31, 37, 101]
    assert listed == sorted(listed)
    assert ps.count() == len(listed)
    assert ps.min_prime() == 2
    assert ps.max_prime() == 101
    assert ps.contains(37) and not ps.contains(19)
    assert PrimeSet.below(14).to_list() == [2, 3, 5, 7, 11, 13]


def test_primeset_product_and_complement():
    ps = PrimeSet.explicit([3, 5])
    assert ps.product() == 15
    assert euler_complement(ps) == Fraction(8, 15)


def test_next_prime_above():
    assert next_prime_above(8) == 11
    assert next_prime_above(2) == 3
    assert next_prime_above(0) == 2
