"""Binary entropy, empirical block entropies, and high-entropy word sampling.

Counts and weights stay exact integers/Fractions; entropies are base-2
floats (convention here: the entropy function maps [0,1] onto [0,1], its
maximum 1 at 1/2). Assertions on float quantities use FLOAT_TOL.

Shortest-program complexity is not computable, so certified words carry the
one property downstream code ever uses: an empirical block entropy bound,
found by seeded random search among fixed-weight words and re-checkable
from the certificate alone.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from math import exp, log2

from .errors import ExhaustedAttempts, OverlapError, PlanInvalid
from .sequence import block_distribution, block_plan

FLOAT_TOL = 1e-9


@dataclass(frozen=True)
class BlockPlan:
    """Sampling plan for disjoint blocks: m of them fit, covering l_prime."""

    n: int
    length: int
    m: int
    l_prime: int

    @classmethod
    def of(cls, length, n):
        m, l_prime = block_plan(length, n)
        return cls(n, length, m, l_prime)


def neg_xlog2(x):
    """-x * log2(x) with the boundary convention 0 at x = 0."""
    if not 0 <= x <= 1:
        raise ValueError("argument must lie in [0, 1]")
    x = float(x)
    if x == 0.0:
        return 0.0
    return -x * log2(x)


def binary_entropy(t):
    """H(t) = -t log2 t - (1-t) log2 (1-t), zero at both endpoints."""
    if not 0 <= t <= 1:
        raise ValueError("argument must lie in [0, 1]")
    t = float(t)
    return neg_xlog2(t) + neg_xlog2(1.0 - t)


@dataclass(frozen=True)
class Word:
    """A binary word; bits[i] in {0,1}, positions are 1-based in set APIs."""

    bits: bytes

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("empty word")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0/1")

    @property
    def length(self):
        return len(self.bits)

    def weight(self):
        return sum(self.bits)

    def ones_positions(self):
        """1-based positions carrying a one."""
        return {i + 1 for i, b in enumerate(self.bits) if b}

    def to01(self):
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from01(cls, s):
        return cls(bytes(1 if c == "1" else 0 for c in s))

    @classmethod
    def from_positions(cls, length, ones):
        bits = bytearray(length)
        for i in ones:
            if not 1 <= i <= length:
                raise ValueError("position %d outside [1, %d]" % (i, length))
            bits[i - 1] = 1
        return cls(bytes(bits))


def shannon_bits(dist):
    """Shannon entropy (bits) of a BlockDistribution."""
    h = 0.0
    for c in dist.counts.values():
        p = c / dist.total
        h -= p * log2(p)
    return h


def block_entropy(w, n, mode="overlapping", offset=0):
    """Empirical entropy of length-n blocks, overlapping or offset sampling."""
    return shannon_bits(block_distribution(w, n, mode=mode, offset=offset))


def truncation_slack(n, L):
    """2^n * neg_xlog2(n / (L - (n-1))): entropy cost of dropping a tail.

    The bound argument needs n/(L-(n-1)) <= 1/e; outside that regime the
    value is still returned with regime_ok=False.
    """
    if L <= n - 1:
        raise PlanInvalid("need L > n - 1")
    x = Fraction(n, L - (n - 1))
    regime_ok = float(x) <= exp(-1)
    return (2**n) * neg_xlog2(float(x)), regime_ok


@dataclass(frozen=True)
class InequalityReport:
    n: int
    length: int
    lhs: float
    offset_mean: float
    slack_term: float
    slack: float
    regime_ok: bool

    @property
    def holds(self):
        return self.slack >= -FLOAT_TOL


def entropy_inequality_check(w, n):
    """Overlapping block entropy vs mean of offset entropies minus slack.

    Checks H_n(w) >= (1/n) * sum_s H_n^s(w) - q where q = truncation_slack.
    Returns both sides and the achieved slack (LHS - RHS).
    """
    bits = w.bits if hasattr(w, "bits") else bytes(w)
    L = len(bits)
    m, _ = block_plan(L, n)
    if m < 1:
        raise PlanInvalid("need at least one offset block")
    lhs = block_entropy(bits, n, mode="overlapping")
    offs = [block_entropy(bits, n, mode="offset", offset=s) for s in range(n)]
    mean = sum(offs) / n
    q, regime_ok = truncation_slack(n, L)
    slack = lhs - (mean - q)
    return InequalityReport(n, L, lhs, mean, q, slack, regime_ok)


@dataclass(frozen=True)
class EntropyCertificate:
    """Self-contained record that a word hit its entropy target.

    pass_ok holds iff the weight clause gamma*L <= weight <= (gamma+eps)*L
    and the entropy clause H_n/n >= binary_entropy(gamma) - kappa (within
    FLOAT_TOL) both hold; seed and attempts make the run reproducible.
    """

    word01: str
    gamma: Fraction
    eps: Fraction
    kappa: Fraction
    n: int
    weight: int
    h_value: float
    threshold: float
    pass_ok: bool
    seed: int
    attempts: int

    def revalidate(self):
        """Recheck every clause from the stored fields alone."""
        w = Word.from01(self.word01)
        L = w.length
        weight = w.weight()
        weight_ok = (
            weight == self.weight
            and self.gamma * L <= weight <= (self.gamma + self.eps) * L
        )
        h = block_entropy(w, self.n) / self.n
        entropy_ok = h >= self.threshold - FLOAT_TOL
        h_matches = abs(h - self.h_value) <= FLOAT_TOL
        return weight_ok and h_matches and (weight_ok and entropy_ok) == self.pass_ok


def _weight_choice(L, gamma, eps):
    """Smallest integer k with gamma + eps/2 < k/L < gamma + eps, or None."""
    lo = (gamma + eps / 2) * L
    hi = (gamma + eps) * L
    k = int(lo) + 1
    if Fraction(k) <= lo:
        k += 1
    if Fraction(k) < hi:
        return k
    return None


def sample_high_entropy_word(L, gamma, eps, n, kappa, seed, max_attempts=64):
    """Seeded search for a fixed-weight word with H_n/n above the target.

    Draws uniform words of the chosen weight k (gamma + eps/2 < k/L <
    gamma + eps) and accepts the first whose block entropy rate reaches
    binary_entropy(gamma) - kappa. Same seed, same word, bit for bit.
    """
    gamma, eps, kappa = Fraction(gamma), Fraction(eps), Fraction(kappa)
    if not 0 < gamma:
        raise ValueError("gamma must be positive")
    if gamma + eps > Fraction(1, 2):
        raise ValueError("need gamma + eps <= 1/2")
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    k = _weight_choice(L, gamma, eps)
    if k is None:
        raise ValueError(
            "no integer weight in ((gamma+eps/2)L, (gamma+eps)L) for L=%d" % L
        )
    threshold = binary_entropy(gamma) - float(kappa)
    rng = random.Random(seed)
    best = None
    for attempt in range(1, max_attempts + 1):
        ones = rng.sample(range(1, L + 1), k)
        w = Word.from_positions(L, ones)
        h = block_entropy(w, n) / n
        if best is None or h > best[0]:
            best = (h, w, attempt)
        if h >= threshold - FLOAT_TOL:
            cert = EntropyCertificate(
                word01=w.to01(),
                gamma=gamma,
                eps=eps,
                kappa=kappa,
                n=n,
                weight=k,
                h_value=h,
                threshold=threshold,
                pass_ok=True,
                seed=seed,
                attempts=attempt,
            )
            return w, cert
    raise ExhaustedAttempts(
        "no word of length %d reached H_%d/%d >= %.6f in %d attempts "
        "(best %.6f); raise L" % (L, n, n, threshold, max_attempts, best[0]),
        attempts=max_attempts,
    )


def find_word_length(gamma, eps, n, kappa, seed, start_length=16, attempts_per_L=8,
                     max_length=1 << 22):
    """Double L until sampling succeeds within attempts_per_L tries.

    Returns (L, word, certificate). This is the empirical stand-in for the
    non-constructive minimum length in the entropy guarantee.
    """
    L = start_length
    while L <= max_length:
        try:
            w, cert = sample_high_entropy_word(
                L, gamma, eps, n, kappa, seed, max_attempts=attempts_per_L
            )
            return L, w, cert
        except (ExhaustedAttempts, ValueError):
            L *= 2
    raise ExhaustedAttempts("no admissible length up to %d" % max_length)


def edit_word(w, deletions, insertions):
    """New word with 1-based positions `deletions` cleared, `insertions` set.

    Precondition: no position both survives deletion and is inserted, i.e.
    insertions and (ones(w) minus deletions) are disjoint; violating pairs
    raise OverlapError.
    """
    L = w.length
    dels = set(deletions)
    ins = set(insertions)
    for s in (dels, ins):
        for i in s:
            if not 1 <= i <= L:
                raise ValueError("position %d outside [1, %d]" % (i, L))
    survivors = w.ones_positions() - dels
    clash = ins & survivors
    if clash:
        raise OverlapError("insertions hit surviving ones at %s" % sorted(clash))
    bits = bytearray(w.bits)
    for i in dels:
        bits[i - 1] = 0
    for i in ins:
        bits[i - 1] = 1
    return Word(bytes(bits))


@dataclass(frozen=True)
class WeightDriftReport:
    weight: int
    lower: Fraction
    upper: Fraction
    lower_slack: Fraction
    upper_slack: Fraction
    d_deletions: Fraction
    d_insertions: Fraction
    density_pre_ok: bool

    @property
    def holds(self):
        return self.lower_slack >= 0 and self.upper_slack >= 0


def edit_weight_check(w, deletions, insertions, gamma, eps):
    """Weight of the edited word against (gamma-eps)L .. (gamma+2eps)L.

    Requires the edit precondition; reports whether the deletion/insertion
    densities stay below eps (density_pre_ok) and exact slack on both ends.
    """
    gamma, eps = Fraction(gamma), Fraction(eps)
    edited = edit_word(w, deletions, insertions)
    L = w.length
    weight = edited.weight()
    lower = (gamma - eps) * L
    upper = (gamma + 2 * eps) * L
    d_a = Fraction(len(set(deletions)), L)
    d_b = Fraction(len(set(insertions)), L)
    return WeightDriftReport(
        weight=weight,
        lower=lower,
        upper=upper,
        lower_slack=weight - lower,
        upper_slack=upper - weight,
        d_deletions=d_a,
        d_insertions=d_b,
        density_pre_ok=d_a < eps and d_b < eps,
    )
