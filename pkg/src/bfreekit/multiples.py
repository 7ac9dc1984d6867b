"""Sets of multiples: primitivization, quotients, exact densities, window sieves.

A `BFreeDescriptor` is a finite, sorted prefix of a (possibly infinite) base
set plus an exactness horizon: every element outside the prefix is known to
exceed the horizon, so membership questions inside [-horizon, horizon] are
answered by the prefix alone. Window operations refuse to answer outside the
horizon rather than silently truncating the tail.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd

from . import _kernels
from .arith import PrimeSet, lcm_fold
from .errors import BudgetExceeded, CapacityExceeded, HorizonExceeded

DENSITY_BUDGET = 10**6
BRUTE_SIEVE_CAP = 10**7
BRUTE_SUBSET_LIMIT = 24


@dataclass(frozen=True)
class BFreeDescriptor:
    """Finite view of a base set: sorted prefix, horizon, optional tail data.

    horizon=None means the prefix IS the whole set. Otherwise every element
    beyond the prefix exceeds `horizon`, `tail_reciprocal_bound` bounds the
    sum of reciprocals of the tail, and `tail` references the construction
    that certified both.
    """

    prefix: tuple
    horizon: int = None
    tail: object = None
    tail_reciprocal_bound: Fraction = None
    primitive: bool = False

    def __post_init__(self):
        pref = tuple(sorted(set(int(b) for b in self.prefix)))
        if any(b < 2 for b in pref):
            raise ValueError("descriptor elements must be >= 2")
        object.__setattr__(self, "prefix", pref)
        if self.horizon is not None:
            if pref and self.horizon < pref[-1]:
                raise ValueError("horizon below the largest prefix element")
        if self.primitive and not is_primitive(pref):
            raise ValueError("primitive flag set but prefix is not primitive")

    @property
    def has_tail(self):
        return self.horizon is not None

    def nonempty(self):
        return bool(self.prefix) or self.has_tail

    def check_window(self, a, length):
        if length < 1:
            raise ValueError("window length must be >= 1")
        if self.horizon is None:
            return
        worst = max(abs(a), abs(a + length - 1))
        if worst > self.horizon:
            raise HorizonExceeded(
                "window [%d, %d) leaves horizon %d" % (a, a + length, self.horizon)
            )


@dataclass(frozen=True)
class WindowBitmap:
    """Membership mask of a set restricted to [start, start+length)."""

    start: int
    length: int
    mask: bytes

    def __post_init__(self):
        if self.length != len(self.mask) or self.length < 1:
            raise ValueError("mask length mismatch")

    def count(self):
        return sum(self.mask)

    def members(self):
        return [self.start + i for i in range(self.length) if self.mask[i]]

    def complement(self):
        flipped = bytes(1 - b for b in self.mask)
        return WindowBitmap(self.start, self.length, flipped)


def is_primitive(B):
    """True iff no element divides another one."""
    xs = sorted(set(B))
    for i, b in enumerate(xs):
        for c in xs[i + 1 :]:
            if c % b == 0:
                return False
    return True


def primitivize(B):
    """The unique subset with the same multiples and no internal divisibility.

    Removes every element that is a multiple of a smaller element.
    """
    xs = sorted(set(int(b) for b in B))
    if any(b < 2 for b in xs):
        raise ValueError("elements must be >= 2")
    keep = []
    for b in xs:
        if not any(b % k == 0 for k in keep):
            keep.append(b)
    return tuple(keep)


def quotient_by(B, k):
    """{b // k : b in B, k divides b}; empty results are fine."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return tuple(sorted({b // k for b in B if b % k == 0}))


# shared process-wide: entries are immutable Fractions inserted fully
# constructed, so concurrent readers under the GIL never see partial state
_density_memo = {}


def clear_density_cache():
    _density_memo.clear()


def _density_rec(key, budget):
    # key is a primitivized sorted tuple of integers >= 2
    if not key:
        return Fraction(0), budget
    hit = _density_memo.get(key)
    if hit is not None:
        return hit, budget
    if budget <= 0:
        raise BudgetExceeded("density recursion budget exhausted")
    budget -= 1
    rest, a = key[:-1], key[-1]
    d_rest, budget = _density_rec(rest, budget)
    quotients = {x // gcd(x, a) for x in rest}
    if 1 in quotients:
        # a is itself a multiple of an earlier element, nothing new
        correction = Fraction(0)
    else:
        d_quot, budget = _density_rec(primitivize(quotients), budget)
        correction = Fraction(1, a) * (1 - d_quot)
    value = d_rest + correction
    _density_memo[key] = value
    return value, budget


def exact_density(B, budget=DENSITY_BUDGET):
    """Exact density of the set of multiples of a finite set.

    Recursion over elements, largest last: adding a contributes
    (1/a) * (1 - density(multiples of {x/gcd(x,a)})), which counts exactly
    the multiples of a avoiding the earlier elements. Memoized on the
    primitivized sorted key; raises BudgetExceeded past the node budget.
    """
    xs = primitivize(B)
    value, _ = _density_rec(xs, budget)
    return value


def _ie_count(B, N):
    """card(multiples of B in [1, N]) by subset inclusion-exclusion."""
    xs = primitivize(B)
    if len(xs) > BRUTE_SUBSET_LIMIT:
        raise CapacityExceeded(
            "inclusion-exclusion over %d elements refused" % len(xs),
            needed=len(xs),
            cap=BRUTE_SUBSET_LIMIT,
        )
    total = 0
    for r in range(1, len(xs) + 1):
        sign = 1 if r % 2 else -1
        for sub in combinations(xs, r):
            total += sign * (N // lcm_fold(sub))
    return total


def brute_density_oracle(B, sieve_cap=BRUTE_SIEVE_CAP):
    """Independent density oracle: count members over one full period.

    Counts by a literal sieve when the period lcm(B) fits `sieve_cap`, and
    by exact floor-division inclusion-exclusion over subsets beyond that;
    both count the same cardinality exactly.
    """
    xs = primitivize(B)
    if not xs:
        return Fraction(0)
    period = lcm_fold(xs)
    if period <= sieve_cap:
        mask = _kernels.mark_multiples(1, period, xs)
        return Fraction(sum(mask), period)
    return Fraction(_ie_count(xs, period), period)


def sieve_window(desc, a, length):
    """Membership mask of the multiples of `desc` on [a, a+length).

    Each prefix element marks its arithmetic progression; no per-position
    trial division. Requires the window to sit inside the horizon. Position
    0 is a multiple of everything, so it is marked whenever the descriptor
    is nonempty (even when the prefix alone is empty).
    """
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    desc.check_window(a, length)
    mask = bytearray(_kernels.mark_multiples(a, length, desc.prefix))
    if desc.nonempty() and not desc.prefix and a <= 0 < a + length:
        mask[-a] = 1
    return WindowBitmap(a, length, bytes(mask))


def count_scan(desc, a_range, length):
    """Exact min/max of window membership counts with witnesses.

    a_range is an inclusive (lo, hi) pair of window starts; ties resolve to
    the smallest start.
    """
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    a_lo, a_hi = a_range
    if a_hi < a_lo:
        raise ValueError("empty start range")
    desc.check_window(a_lo, (a_hi - a_lo) + length)
    covering = sieve_window(desc, a_lo, (a_hi - a_lo) + length)
    lo, lo_at, hi, hi_at = _kernels.window_extrema(covering.mask, length)
    return lo, a_lo + lo_at, hi, a_lo + hi_at


def trial_division_count(desc, a, length):
    """Slow per-position oracle for sieve_window; used by the test suite."""
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    desc.check_window(a, length)
    count = 0
    for n in range(a, a + length):
        if n == 0:
            if desc.nonempty():
                count += 1
        elif any(n % b == 0 for b in desc.prefix):
            count += 1
    return count


def coprime_subset_extract(B, target):
    """Greedy pairwise-coprime chain: ascending scan, keep iff coprime to kept.

    A chain of size >= target is a positive witness; a shorter chain proves
    nothing about the infinite set (heuristic by design).
    """
    chain = []
    for b in sorted(set(B)):
        if all(gcd(b, c) == 1 for c in chain):
            chain.append(b)
    del target  # the caller compares len(chain) against its target
    return chain


def covered_by_primes_check(B, P):
    """(True, None) iff every element is divisible by some prime of P.

    On failure returns (False, smallest uncovered element).
    """
    if isinstance(P, PrimeSet):
        primes = P.to_list()
    else:
        primes = sorted(set(P))
    for b in sorted(set(B)):
        if not any(b % p == 0 for p in primes):
            return False, b
    return True, None


@dataclass(frozen=True)
class ExplicitInstance:
    """Wraps an explicit finite set as an instance with a window schedule.

    Lets the sequence-level reports run on hand-made sets; `schedule` lists
    (T_k, L_k) pairs, 1-indexed by level.
    """

    prefix: tuple
    schedule: tuple = ()

    def descriptor(self):
        return BFreeDescriptor(prefix=self.prefix)

    def window_schedule(self, k):
        if not 1 <= k <= len(self.schedule):
            raise ValueError("no schedule entry %d" % k)
        return self.schedule[k - 1]
