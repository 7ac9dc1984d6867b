"""Shared oracles and toy instances.

Oracles here are deliberately naive (trial division, per-position scans,
literal counting) and independent of the library's fast paths; tests pin
the fast paths against them.
"""

from fractions import Fraction

import pytest

from bfreekit.constructions import (
    BesicovitchRecipe,
    EntropySeededRecipe,
    PrimeTowerRecipe,
    build_besicovitch,
    build_entropy_seeded,
    build_prime_tower,
)


def trial_division_primes(lo, hi):
    out = []
    for n in range(max(lo, 2), hi + 1):
        d = 2
        prime = n >= 2
        while d * d <= n:
            if n % d == 0:
                prime = False
                break
            d += 1
        if prime:
            out.append(n)
    return out


def naive_multiples_count(B, a, length):
    """Per-position divisibility scan; 0 counts as a multiple of anything."""
    count = 0
    for n in range(a, a + length):
        if n == 0:
            count += 1 if B else 0
        elif any(n % b == 0 for b in B):
            count += 1
    return count


def naive_period_density(B):
    """Literal count over one full period, the slow way."""
    from math import lcm

    period = lcm(*B)
    hits = sum(1 for n in range(1, period + 1) if any(n % b == 0 for b in B))
    return Fraction(hits, period)


TOWER_TOY = PrimeTowerRecipe(
    depth=3,
    deltas=(Fraction(8, 15), Fraction(60, 77)),
    betas=(2, 5),
    future_floor=10**6,
)

SEEDED_COMMON = dict(
    eps=Fraction(1, 5),
    gamma=Fraction(3, 10),
    kappa=Fraction(1, 10),
    block_n=2,
    depth=2,
    eps_schedule=(Fraction(7, 10), Fraction(13, 20)),
    seed=20250808,
)

BESICOVITCH_TOY = BesicovitchRecipe(
    eps=Fraction(9, 10),
    eps_schedule=(Fraction(7, 10), Fraction(2, 3)),
    depth=2,
)


@pytest.fixture(scope="session")
def tower_toy():
    return build_prime_tower(TOWER_TOY)


@pytest.fixture(scope="session")
def tower_strict_k1():
    return build_prime_tower(PrimeTowerRecipe(depth=1))


@pytest.fixture(scope="session")
def seeded_equal():
    return build_entropy_seeded(EntropySeededRecipe(mode="equal", **SEEDED_COMMON))


@pytest.fixture(scope="session")
def seeded_thin():
    return build_entropy_seeded(EntropySeededRecipe(mode="thin", **SEEDED_COMMON))


@pytest.fixture(scope="session")
def besicovitch_toy():
    return build_besicovitch(BESICOVITCH_TOY)
