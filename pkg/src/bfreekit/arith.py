"""Exact arithmetic and prime machinery shared by every other module.

Densities and bounds are `fractions.Fraction` throughout (alias `Rational`);
nothing in this module ever rounds. Prime generation is a segmented sieve
with a hard capacity: beyond the cap operations raise `CapacityExceeded`
instead of approximating, because downstream certificates must stay exact.
"""

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .errors import CapacityExceeded

Rational = Fraction

DEFAULT_SIEVE_CAP = 10**8
_SEGMENT = 1 << 18


def sieve_cap():
    """Active sieve capacity; BFREEKIT_SIEVE_CAP overrides the default."""
    raw = os.environ.get("BFREEKIT_SIEVE_CAP")
    return int(raw) if raw else DEFAULT_SIEVE_CAP


def _check_cap(hi, cap):
    cap = sieve_cap() if cap is None else cap
    if hi > cap:
        raise CapacityExceeded(
            "sieve bound %d exceeds capacity %d" % (hi, cap), needed=hi, cap=cap
        )


def _small_primes(limit):
    """All primes <= limit by a plain sieve (limit stays near sqrt(cap))."""
    if limit < 2:
        return []
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = b"\x00" * ((limit - start) // p + 1)
    return [i for i in range(2, limit + 1) if flags[i]]


def primes_in_range(lo, hi, cap=None):
    """Ascending list of primes in [lo, hi], segmented above the base sieve.

    Raises CapacityExceeded when hi is beyond the configured cap, which
    signals that a construction instance needs relaxed constants.
    """
    if lo < 2 or lo > hi:
        raise ValueError("need 2 <= lo <= hi, got [%d, %d]" % (lo, hi))
    _check_cap(hi, cap)
    base = _small_primes(isqrt(hi))
    out = []
    seg_lo = lo
    while seg_lo <= hi:
        seg_hi = min(seg_lo + _SEGMENT - 1, hi)
        size = seg_hi - seg_lo + 1
        flags = bytearray(b"\x01") * size
        for p in base:
            if p * p > seg_hi:
                break
            first = max(p * p, ((seg_lo + p - 1) // p) * p)
            if first <= seg_hi:
                flags[first - seg_lo :: p] = b"\x00" * ((seg_hi - first) // p + 1)
        out.extend(seg_lo + i for i in range(size) if flags[i])
        seg_lo = seg_hi + 1
    return out


def is_prime(n):
    """Deterministic primality by trial division (fine for desk sizes)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime_above(x, cap=None):
    """Smallest prime strictly greater than x."""
    n = max(2, x + 1)
    while True:
        _check_cap(n, cap)
        if is_prime(n):
            return n
        n += 1


def lcm_fold(xs):
    """Least common multiple of a nonempty list of positive integers."""
    xs = list(xs)
    if not xs:
        raise ValueError("lcm_fold needs at least one value")
    acc = 1
    for x in xs:
        if x <= 0:
            raise ValueError("lcm_fold needs positive integers")
        acc = acc // gcd(acc, x) * x
    return acc


@dataclass(frozen=True)
class PrimeSet:
    """Primes as disjoint closed intervals plus explicit extras.

    The interval form exists so "all primes below a bound" never has to be
    materialized inside descriptors; enumeration stays ascending and counts
    and endpoints are answered without building full lists.
    """

    intervals: tuple = ()
    extras: tuple = ()
    _count_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", tuple(sorted(ivs)))
        object.__setattr__(self, "extras", tuple(sorted(int(e) for e in self.extras)))
        prev_hi = 1
        for lo, hi in self.intervals:
            if lo < 2 or hi < lo:
                raise ValueError("bad prime interval [%d, %d]" % (lo, hi))
            if lo <= prev_hi:
                raise ValueError("prime intervals overlap")
            prev_hi = hi
        seen = set()
        for e in self.extras:
            if not is_prime(e):
                raise ValueError("extra %d is not prime" % e)
            if e in seen or self._in_intervals(e):
                raise ValueError("extra %d duplicates the interval part" % e)
            seen.add(e)

    @classmethod
    def explicit(cls, primes):
        return cls(extras=tuple(primes))

    @classmethod
    def below(cls, bound):
        """All primes p with p < bound."""
        if bound <= 2:
            return cls()
        return cls(intervals=((2, bound - 1),))

    def _in_intervals(self, p):
        return any(lo <= p <= hi for lo, hi in self.intervals)

    def contains(self, p):
        return (self._in_intervals(p) and is_prime(p)) or p in self.extras

    def iter_primes(self, cap=None):
        """Yield members in increasing order."""
        pending = self.extras
        pos = 0
        for lo, hi in self.intervals:
            while pos < len(pending) and pending[pos] < lo:
                yield pending[pos]
                pos += 1
            yield from primes_in_range(lo, hi, cap=cap)
        while pos < len(pending):
            yield pending[pos]
            pos += 1

    def to_list(self, cap=None):
        return list(self.iter_primes(cap=cap))

    def is_empty(self):
        return not self.intervals and not self.extras

    def count(self, cap=None):
        """Number of members; interval counts are cached per instance."""
        total = len(self.extras)
        for lo, hi in self.intervals:
            key = (lo, hi)
            if key not in self._count_cache:
                self._count_cache[key] = len(primes_in_range(lo, hi, cap=cap))
            total += self._count_cache[key]
        return total

    def min_prime(self, cap=None):
        cands = []
        if self.extras:
            cands.append(self.extras[0])
        if self.intervals:
            lo, hi = self.intervals[0]
            n = lo if is_prime(lo) else next_prime_above(lo, cap=cap)
            if n <= hi:
                cands.append(n)
            else:
                rest = PrimeSet(intervals=self.intervals[1:], extras=self.extras)
                return rest.min_prime(cap=cap)
        if not cands:
            raise ValueError("empty prime set has no minimum")
        return min(cands)

    def max_prime(self, cap=None):
        cands = []
        if self.extras:
            cands.append(self.extras[-1])
        for lo, hi in reversed(self.intervals):
            p = hi
            while p >= lo and not is_prime(p):
                p -= 1
            if p >= lo:
                cands.append(p)
                break
        if not cands:
            raise ValueError("empty prime set has no maximum")
        return max(cands)

    def product(self, cap=None):
        acc = 1
        for p in self.iter_primes(cap=cap):
            acc *= p
        return acc

    def union_extras(self, primes):
        """New PrimeSet with additional explicit primes (must stay disjoint)."""
        return PrimeSet(intervals=self.intervals, extras=self.extras + tuple(primes))


def euler_complement(P, cap=None):
    """Exact prod_{p in P} (1 - 1/p) as a Fraction."""
    acc = Fraction(1)
    for p in P.iter_primes(cap=cap) if isinstance(P, PrimeSet) else iter(P):
        acc *= Fraction(p - 1, p)
    return acc


def euler_density(P, cap=None):
    """Density of the multiples of a set of distinct primes: 1 - prod(1-1/p)."""
    if isinstance(P, PrimeSet):
        if P.is_empty():
            raise ValueError("euler_density needs a nonempty prime set")
    else:
        P = PrimeSet.explicit(P)
        if P.is_empty():
            raise ValueError("euler_density needs a nonempty prime set")
    return 1 - euler_complement(P, cap=cap)


def parse_rational(text):
    """Parse "num/den" or a plain integer string into a Fraction."""
    s = text.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(q):
    """Canonical "num/den" form (integers keep a /1 for round-trip safety)."""
    q = Fraction(q)
    return "%d/%d" % (q.numerator, q.denominator)
