"""Period certificates, level densities, irregularity accounting, covers."""

import random
from fractions import Fraction

import pytest

from bfreekit.errors import LevelUnavailable
from bfreekit.multiples import BFreeDescriptor
from bfreekit.toeplitz import (
    ONE,
    UNDECIDED,
    ZERO,
    certify_position,
    compute_level,
    irregularity_lower_bound,
    level_report,
    regularity_profile,
    strict_irregularity_floor,
    toeplitz_prime_check,
)


def test_level_data_toy(tower_toy):
    lev1 = tower_toy.level_data(1)
    assert lev1.ell == 8 and set(lev1.gcd_set) == {8, 2}
    lev2 = tower_toy.level_data(2)
    assert lev2.ell == 120 and set(lev2.gcd_set) == {8, 30, 6, 10}


def test_level_data_explicit():
    lev = compute_level({2}, 1)
    assert lev.ell == 2 and lev.gcd_set == (2,)
    lev = compute_level((8, 30), 1)
    assert lev.ell == 8 and set(lev.gcd_set) == {2, 8}
    with pytest.raises(LevelUnavailable):
        compute_level((8, 30), 3)
    desc = BFreeDescriptor(prefix=(8,), horizon=100, tail=object())
    with pytest.raises(LevelUnavailable):
        compute_level(desc, 1)


def test_certify_position_toy(tower_toy):
    lev2 = tower_toy.level_data(2)
    cert = certify_position(lev2, 16)
    assert cert.basis == ZERO and cert.divisor == 8 and cert.period == 120
    assert cert.revalidate(lev2)
    cert = certify_position(lev2, 1)
    assert cert.basis == ONE and cert.period == 120 and cert.revalidate(lev2)
    cert = certify_position(lev2, 6)
    assert cert.basis == UNDECIDED and cert.revalidate(lev2)


def test_certificate_soundness_sampled(tower_toy):
    """Zero/One certificates are checked against the sieve along the class."""
    desc = tower_toy.descriptor()
    rng = random.Random(424242)
    checked = 0
    for k in (1, 2, 3):
        lev = tower_toy.level_data(k)
        span = desc.horizon // lev.ell
        for _ in range(400):
            n = rng.randrange(-2 * lev.ell, 2 * lev.ell)
            cert = certify_position(lev, n)
            j = rng.randrange(-span, span + 1)
            pos = n + j * lev.ell
            if abs(pos) > desc.horizon:
                continue
            member = pos == 0 or any(pos % b == 0 for b in desc.prefix)
            if cert.basis == ZERO:
                assert member, (k, n, j)
                checked += 1
            elif cert.basis == ONE:
                assert not member, (k, n, j)
                checked += 1
    assert checked > 500


def test_monotone_refinement(tower_toy):
    """A certified value persists at deeper levels."""
    levels = [tower_toy.level_data(k) for k in (1, 2, 3)]
    for n in range(-500, 500):
        decided = None
        for lev in levels:
            cert = certify_position(lev, n)
            if decided is not None and cert.basis != UNDECIDED:
                assert cert.value == decided
            if cert.basis != UNDECIDED:
                decided = cert.value
        if decided is not None:
            deepest = certify_position(levels[-1], n)
            assert deepest.basis != UNDECIDED and deepest.value == decided


def test_level_report_toy(tower_toy):
    rep = level_report(tower_toy.level_data(2))
    # brute count over one period 120: 18 multiples of {8,30}, 36 of the gcd set
    assert rep.d_zero == Fraction(3, 20)
    assert rep.d_one == Fraction(7, 10)
    assert rep.d_undecided == Fraction(3, 20)
    assert rep.d_zero + rep.d_one + rep.d_undecided == 1


def test_level_report_brute_oracle(tower_toy):
    lev = tower_toy.level_data(2)
    ell = lev.ell
    zero = sum(1 for n in range(1, ell + 1) if any(n % b == 0 for b in lev.level_set))
    one = sum(1 for n in range(1, ell + 1) if all(n % a for a in lev.gcd_set))
    rep = level_report(lev)
    assert rep.d_zero == Fraction(zero, ell)
    assert rep.d_one == Fraction(one, ell)


def test_level_report_regular_and_empty():
    rep = level_report(compute_level({2}, 1))
    assert (rep.d_zero, rep.d_one, rep.d_undecided) == (
        Fraction(1, 2),
        Fraction(1, 2),
        Fraction(0),
    )
    rep = level_report(compute_level((), 0))
    assert rep.d_one == 1


def test_class_densities_sum_to_one_every_level(tower_toy):
    for k in (1, 2, 3):
        rep = level_report(tower_toy.level_data(k))
        assert rep.d_zero + rep.d_one + rep.d_undecided == 1


def test_regularity_profile(tower_toy):
    profile = regularity_profile(tower_toy, [1, 2, 3])
    assert profile == sorted(profile)  # nondecreasing refinement
    assert all(p < 1 for p in profile)
    gap = 1 - profile[-1]
    assert gap >= irregularity_lower_bound(tower_toy, 3)


def test_regularity_profile_regular_sets():
    assert regularity_profile({2}, [1]) == [1]
    assert regularity_profile((2, 3), [2]) == [1]


def test_irregularity_bound_toy(tower_toy):
    bound = irregularity_lower_bound(tower_toy, 2)
    assert bound > 0
    # independent recomputation: gcd-set density by brute period count,
    # minus prefix reciprocals and the certified tail bound
    lev = tower_toy.level_data(2)
    ell = lev.ell
    hits = sum(1 for n in range(1, ell + 1) if any(n % a == 0 for a in lev.gcd_set))
    upper = sum(Fraction(1, b) for b in tower_toy.generators)
    upper += tower_toy.tail_reciprocal_bound
    assert bound == Fraction(hits, ell) - upper


def test_irregularity_bound_regular_case():
    assert irregularity_lower_bound(BFreeDescriptor(prefix=(2,)), 1) <= 0


def test_strict_floor_value():
    assert strict_irregularity_floor() == Fraction(3, 16)


def test_prime_cover_check():
    verdicts = toeplitz_prime_check((6, 10, 15), [1, 2, 6])
    assert verdicts[1].covered and set(verdicts[1].primes) <= {2, 3, 5}
    assert verdicts[6].skipped
    assert verdicts[2].covered  # {3, 5} covered by {3, 5}
    verdicts = toeplitz_prime_check((4, 9, 25, 49), [1], prime_cap=5)
    v = verdicts[1]
    assert not v.covered and v.uncovered_witness == 49
    assert list(v.coprime_chain) == [4, 9, 25, 49]
    with pytest.raises(ValueError):
        toeplitz_prime_check((2, 4), [3])
