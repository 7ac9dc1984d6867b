"""Entropy function, block entropies, word sampling, edits."""

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bfreekit.entropy import (
    FLOAT_TOL,
    Word,
    binary_entropy,
    block_entropy,
    edit_weight_check,
    edit_word,
    entropy_inequality_check,
    find_word_length,
    neg_xlog2,
    sample_high_entropy_word,
    truncation_slack,
)
from bfreekit.errors import ExhaustedAttempts, OverlapError


def test_neg_xlog2_values():
    assert neg_xlog2(0) == 0.0
    assert neg_xlog2(Fraction(1, 2)) == pytest.approx(0.5, abs=1e-12)
    assert neg_xlog2(Fraction(1, 8)) == pytest.approx(0.375, abs=1e-12)
    with pytest.raises(ValueError):
        neg_xlog2(1.5)


def test_binary_entropy_values():
    assert binary_entropy(Fraction(1, 2)) == pytest.approx(1.0, abs=1e-12)
    assert binary_entropy(0) == 0.0 and binary_entropy(1) == 0.0
    # closed form cross-check, library-independent: 1/2 + (3/4) log2(4/3)
    expected = 0.5 + 0.75 * math.log(4.0 / 3.0) / math.log(2.0)
    assert binary_entropy(Fraction(1, 4)) == pytest.approx(expected, abs=1e-12)
    assert abs(binary_entropy(0.25) - 0.8112781) < 1e-6


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0, allow_nan=False))
def test_binary_entropy_symmetric(t):
    assert binary_entropy(t) == pytest.approx(binary_entropy(1.0 - t), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.001, max_value=0.999),
    st.floats(min_value=0.001, max_value=0.999),
)
def test_binary_entropy_midpoint_concavity(a, b):
    mid = (a + b) / 2.0
    assert binary_entropy(mid) >= (binary_entropy(a) + binary_entropy(b)) / 2.0 - 1e-12


def test_block_entropy_values():
    assert block_entropy(Word.from01("0101"), 1) == pytest.approx(1.0, abs=1e-12)
    assert block_entropy(Word.from01("0000"), 3) == 0.0
    # H({2/3, 1/3}) on the three overlapping 2-blocks of 0101
    expected = -(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3)
    assert block_entropy(Word.from01("0101"), 2) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.91829583, abs=1e-7)


@settings(max_examples=60, deadline=None)
@given(st.binary(min_size=2, max_size=40).map(lambda bs: bytes(b & 1 for b in bs)))
def test_single_block_entropy_is_binary_entropy_of_weight(bits):
    w = Word(bits)
    assert block_entropy(w, 1) == pytest.approx(
        binary_entropy(Fraction(w.weight(), w.length)), abs=1e-12
    )


def test_truncation_slack_values():
    q, ok = truncation_slack(1, 8)
    assert q == pytest.approx(0.75, abs=1e-12) and ok  # 2 * neg_xlog2(1/8)
    q, ok = truncation_slack(2, 17)
    assert q == pytest.approx(1.5, abs=1e-12) and ok  # 4 * neg_xlog2(1/8)
    q, _ = truncation_slack(1, 1 << 20)
    assert q < 1e-4
    _, ok = truncation_slack(3, 7)  # 3/5 > 1/e: outside the monotone regime
    assert not ok


def test_entropy_inequality_alternating_and_constant():
    rep = entropy_inequality_check(Word.from01("01" * 50), 2)
    assert rep.holds and rep.slack >= -FLOAT_TOL
    rep = entropy_inequality_check(Word.from01("0" * 64), 3)
    assert rep.lhs == 0.0 and rep.offset_mean == 0.0 and rep.slack == rep.slack_term


def test_entropy_inequality_random_words():
    rng = random.Random(1234)
    for _ in range(500):
        bits = bytes(rng.randrange(2) for _ in range(256))
        n = rng.choice([1, 2, 3])
        rep = entropy_inequality_check(Word(bits), n)
        assert rep.slack >= -FLOAT_TOL


def test_sampler_success_and_determinism():
    w1, c1 = sample_high_entropy_word(1024, Fraction(1, 4), Fraction(1, 16), 3,
                                      Fraction(1, 10), seed=42)
    w2, c2 = sample_high_entropy_word(1024, Fraction(1, 4), Fraction(1, 16), 3,
                                      Fraction(1, 10), seed=42)
    assert w1.bits == w2.bits and c1 == c2  # bit-exact under the same seed
    w3, _ = sample_high_entropy_word(1024, Fraction(1, 4), Fraction(1, 16), 3,
                                     Fraction(1, 10), seed=43)
    assert w3.bits != w1.bits
    assert c1.pass_ok and c1.revalidate()
    L = w1.length
    assert Fraction(1, 4) * L <= w1.weight() <= (Fraction(1, 4) + Fraction(1, 16)) * L


def test_sampler_rejects_bad_parameters():
    with pytest.raises(ValueError):
        sample_high_entropy_word(3, Fraction(2, 5), Fraction(1, 100), 1,
                                 Fraction(1, 200), seed=0)
    with pytest.raises(ValueError):
        sample_high_entropy_word(64, Fraction(2, 5), Fraction(1, 5), 1,
                                 Fraction(1, 10), seed=0)  # gamma + eps > 1/2


def test_sampler_exhaustion_is_loud():
    # kappa so tight that short words cannot reach the target
    with pytest.raises(ExhaustedAttempts):
        sample_high_entropy_word(12, Fraction(1, 4), Fraction(1, 4), 4,
                                 Fraction(1, 1000), seed=7, max_attempts=3)


def test_find_word_length_doubles_until_success():
    L, w, cert = find_word_length(Fraction(1, 4), Fraction(1, 16), 3,
                                  Fraction(1, 10), seed=9, start_length=16,
                                  attempts_per_L=8)
    assert cert.pass_ok and cert.attempts <= 8
    assert w.length == L


def test_edit_word_examples():
    assert edit_word(Word.from01("1100"), {1}, {3}).to01() == "0110"
    w = Word.from01("1010")
    assert edit_word(w, set(), set()).bits == w.bits
    with pytest.raises(OverlapError):
        edit_word(Word.from01("1000"), set(), {1})


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_edit_weight_is_additive(data):
    bits = data.draw(st.binary(min_size=4, max_size=40).map(
        lambda bs: bytes(b & 1 for b in bs)))
    w = Word(bits)
    L = w.length
    positions = list(range(1, L + 1))
    dels = set(data.draw(st.lists(st.sampled_from(positions), max_size=5)))
    zeros = [i for i in positions if not w.bits[i - 1] and i not in dels] + sorted(dels)
    ins = set(data.draw(st.lists(st.sampled_from(zeros), max_size=5))) if zeros else set()
    edited = edit_word(w, dels, ins)
    survivors = len(w.ones_positions() - dels)
    assert edited.weight() == survivors + len(ins - (w.ones_positions() - dels))
    assert edited.weight() == survivors + len(ins)  # ins disjoint from survivors


def test_edit_weight_check_report():
    w, _ = sample_high_entropy_word(256, Fraction(1, 4), Fraction(1, 16), 2,
                                    Fraction(1, 10), seed=5)
    rep = edit_weight_check(w, set(), set(), Fraction(1, 4), Fraction(1, 16))
    assert rep.holds and rep.density_pre_ok
    assert rep.lower_slack >= Fraction(1, 16) * 256  # weight >= gamma*L already
    dels = set(sorted(w.ones_positions())[:3])
    rep = edit_weight_check(w, dels, set(), Fraction(1, 4), Fraction(1, 16))
    assert rep.holds


def test_edit_weight_check_randomized_triples():
    rng = random.Random(77)
    gamma, eps = Fraction(1, 4), Fraction(1, 10)
    for _ in range(60):
        L = rng.randrange(40, 200)
        w, _ = sample_high_entropy_word(L, gamma, eps, 1, Fraction(1, 20),
                                        seed=rng.randrange(10**6))
        max_sz = int(eps * L) - 1 if int(eps * L) >= 1 else 0
        ones = sorted(w.ones_positions())
        dels = set(rng.sample(ones, min(max_sz, len(ones)))) if max_sz else set()
        zeros = [i for i in range(1, L + 1) if not w.bits[i - 1]]
        ins = set(rng.sample(zeros, min(max_sz, len(zeros)))) if max_sz else set()
        rep = edit_weight_check(w, dels, ins, gamma, eps)
        assert rep.density_pre_ok and rep.holds
