"""Free-position windows, block distributions, scans, TV distances."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bfreekit.errors import WindowTooShort
from bfreekit.multiples import BFreeDescriptor, ExplicitInstance, sieve_window
from bfreekit.sequence import (
    BlockDistribution,
    EtaWindow,
    block_distribution,
    eta_window,
    min_ones_scan,
    ones_density,
    tv_distance,
    two_measure_witness,
)

bits_st = st.binary(min_size=1, max_size=64).map(
    lambda bs: bytes(b & 1 for b in bs)
)


def test_eta_window_examples():
    assert eta_window({2}, 1, 4).to01() == "1010"
    assert eta_window({2, 3}, 1, 6).to01() == "100010"
    assert eta_window(BFreeDescriptor(prefix=()), 5, 4).to01() == "1111"


def test_eta_zero_is_never_free():
    assert eta_window({5}, 0, 1).to01() == "0"
    assert eta_window(BFreeDescriptor(prefix=()), 0, 1).to01() == "1"


@settings(max_examples=40, deadline=None)
@given(
    st.sets(st.integers(min_value=2, max_value=40), min_size=1, max_size=5),
    st.integers(min_value=-60, max_value=60),
    st.integers(min_value=1, max_value=50),
)
def test_eta_complements_sieve(B, a, L):
    member = sieve_window(B, a, L).mask
    free = eta_window(B, a, L).bits
    assert all(m != f for m, f in zip(member, free))


def test_block_distribution_examples():
    w = EtaWindow.from_bits("0101")
    d = block_distribution(w, 2)
    assert d.counts == {"01": 2, "10": 1} and d.total == 3
    d1 = block_distribution(w, 1)
    assert d1.counts == {"0": 2, "1": 2}
    d3 = block_distribution(EtaWindow.from_bits("000000"), 3)
    assert d3.counts == {"000": 4}
    # m = floor((6-2)/3) = 1: the plan keeps the same m for every offset
    d3o = block_distribution(EtaWindow.from_bits("000000"), 3, mode="offset", offset=0)
    assert d3o.counts == {"000": 1} and d3o.total == 1


def test_block_distribution_offset_sampling():
    w = EtaWindow.from_bits("110100101")  # L=9, n=3: m=2 disjoint blocks
    d = block_distribution(w, 3, mode="offset", offset=1)
    assert d.total == 2  # blocks at 0-based starts 1 and 4: 101, 001
    assert d.counts == {"101": 1, "001": 1}


def test_block_distribution_errors():
    w = EtaWindow.from_bits("01")
    with pytest.raises(WindowTooShort):
        block_distribution(w, 3)
    with pytest.raises(ValueError):
        block_distribution(w, 2, mode="offset", offset=2)


def test_frequencies_sum_to_one():
    w = EtaWindow.from_bits("1001101")
    for n in (1, 2, 3):
        for mode, s in (("overlapping", 0), ("offset", n - 1)):
            d = block_distribution(w, n, mode=mode, offset=s)
            assert sum(d.frequencies().values()) == 1


@settings(max_examples=50, deadline=None)
@given(bits_st)
def test_single_blocks_reproduce_ones_density(bits):
    w = EtaWindow.from_bits(bits)
    d = block_distribution(w, 1)
    assert d.freq("1") == ones_density(w)


def test_ones_density_examples():
    assert ones_density(EtaWindow.from_bits("1010")) == Fraction(1, 2)
    assert ones_density(EtaWindow.from_bits("100010")) == Fraction(1, 3)
    assert ones_density(EtaWindow.from_bits("1111")) == 1


def test_min_ones_scan_examples():
    rep = min_ones_scan({2}, (0, 20), 10)
    assert rep.min_density == Fraction(1, 2)
    rep = min_ones_scan({2, 3}, (1, 6), 6)
    assert rep.min_density == Fraction(1, 3)
    rep = min_ones_scan(BFreeDescriptor(prefix=()), (0, 5), 4)
    assert rep.min_density == 1


def test_min_ones_crude_reciprocal_bound():
    rng = random.Random(3)
    for _ in range(60):
        B = tuple(rng.sample(range(2, 50), rng.randrange(1, 6)))
        a = rng.randrange(-40, 40)
        L = rng.randrange(1, 60)
        dens = ones_density(eta_window(B, a, L))
        crude = 1 - sum(Fraction(1, b) for b in B) - Fraction(len(B), L)
        assert dens >= crude  # each progression adds at most L/b + 1 positions


def test_min_ones_reference_reported_not_asserted():
    rep = min_ones_scan({2}, (0, 10), 7)
    assert rep.reference_bound == Fraction(1, 2)
    assert rep.slack == rep.min_density - Fraction(1, 2)
    # unbounded tails give no reference
    desc = BFreeDescriptor(prefix=(2,), horizon=100, tail=object())
    rep = min_ones_scan(desc, (0, 10), 7)
    assert rep.reference_bound is None and rep.slack is None


def test_tv_distance_examples():
    d1 = BlockDistribution(1, {"0": 3, "1": 1}, 4)
    d2 = BlockDistribution(1, {"0": 1, "1": 3}, 4)
    assert tv_distance(d1, d1) == 0
    assert tv_distance(d1, d2) == Fraction(1, 2)
    point0 = BlockDistribution(1, {"0": 5}, 5)
    point1 = BlockDistribution(1, {"1": 2}, 2)
    assert tv_distance(point0, point1) == 1
    with pytest.raises(ValueError):
        tv_distance(d1, BlockDistribution(2, {"00": 1}, 1))


@settings(max_examples=40, deadline=None)
@given(bits_st, bits_st, bits_st)
def test_tv_is_a_metric(x, y, z):
    dx = block_distribution(EtaWindow.from_bits(x), 1)
    dy = block_distribution(EtaWindow.from_bits(y), 1)
    dz = block_distribution(EtaWindow.from_bits(z), 1)
    assert tv_distance(dx, dy) == tv_distance(dy, dx) >= 0
    assert tv_distance(dx, dz) <= tv_distance(dx, dy) + tv_distance(dy, dz)


def test_two_measure_degenerate_period_two():
    inst = ExplicitInstance(prefix=(2,), schedule=((8, 8),))
    rep = two_measure_witness(inst, 1, 1)
    assert rep.tv == 0
    assert rep.head_ones == rep.level_ones == Fraction(1, 2)


def test_two_measure_same_window_twice():
    inst = ExplicitInstance(prefix=(2, 3), schedule=((6, 6),))
    rep = two_measure_witness(inst, 2, 1)
    # window [0,6) vs [6,12): same word by periodicity
    assert rep.tv == 0
