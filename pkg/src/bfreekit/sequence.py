"""Windows of the free-position sequence and their empirical statistics.

The indicator sequence eta has eta[n] = 1 exactly when n is free, i.e. not a
multiple of any base element. Everything here works on explicit [a, a+L)
windows; limits are never extrapolated, scans always declare their ranges.
Frequencies and distances are exact Fractions; only entropies (logs) leave
the rational world.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from .errors import WindowTooShort
from .multiples import BFreeDescriptor, exact_density, sieve_window


@dataclass(frozen=True)
class EtaWindow:
    """Free-position bits on [start, start+length): bits[i] = 1 iff free."""

    start: int
    length: int
    bits: bytes

    def __post_init__(self):
        if self.length != len(self.bits) or self.length < 1:
            raise ValueError("bits length mismatch")

    def ones(self):
        return sum(self.bits)

    def to01(self):
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from_bits(cls, bits, start=0):
        if isinstance(bits, str):
            bits = bytes(1 if c == "1" else 0 for c in bits)
        else:
            bits = bytes(bits)
        return cls(start, len(bits), bits)


@dataclass(frozen=True)
class BlockDistribution:
    """Empirical distribution of length-n binary blocks over some sample."""

    n: int
    counts: dict
    total: int

    def __post_init__(self):
        if self.total <= 0 or self.total != sum(self.counts.values()):
            raise ValueError("total must equal the sum of counts")
        if any(len(w) != self.n for w in self.counts):
            raise ValueError("all block keys must have length n")

    def freq(self, word):
        return Fraction(self.counts.get(word, 0), self.total)

    def frequencies(self):
        return {w: Fraction(c, self.total) for w, c in self.counts.items()}


def eta_window(desc, a, length):
    """Free-position window: the bitwise complement of the multiples mask."""
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    wb = sieve_window(desc, a, length)
    return EtaWindow(a, length, wb.complement().mask)


def _bits_of(w):
    return w.bits if hasattr(w, "bits") else bytes(w)


def block_plan(length, n):
    """(m, L') for non-overlapping sampling: m blocks fit, L' = (m+1)n - 1."""
    if n < 1 or length < n:
        raise WindowTooShort("need window length >= block length")
    m = (length - (n - 1)) // n
    l_prime = (m + 1) * n - 1
    assert l_prime <= length < (m + 2) * n - 1
    return m, l_prime


def block_distribution(w, n, mode="overlapping", offset=0):
    """Counts of length-n blocks of a window.

    mode="overlapping" samples every start (L-n+1 samples); mode="offset"
    samples m = floor((L-(n-1))/n) disjoint blocks starting at `offset`,
    which must lie in [0, n).
    """
    bits = _bits_of(w)
    length = len(bits)
    if n < 1 or n > length:
        raise WindowTooShort("block length %d does not fit window %d" % (n, length))
    if mode == "overlapping":
        m = length - n + 1
        counts = _kernels.block_code_counts(bits, n, 0, 1, m)
    elif mode == "offset":
        if not 0 <= offset < n:
            raise ValueError("offset must lie in [0, n)")
        m, _ = block_plan(length, n)
        if m < 1:
            raise WindowTooShort("window too short for one offset block")
        counts = _kernels.block_code_counts(bits, n, offset, n, m)
    else:
        raise ValueError("unknown mode %r" % (mode,))
    table = {}
    for code, c in enumerate(counts):
        if c:
            table[format(code, "0%db" % n)] = c
    return BlockDistribution(n, table, m)


def ones_density(w):
    """Exact fraction of ones in the window."""
    bits = _bits_of(w)
    if not bits:
        raise ValueError("empty window")
    return Fraction(sum(bits), len(bits))


@dataclass(frozen=True)
class OnesScanReport:
    min_density: Fraction
    witness: int
    length: int
    start_range: tuple
    reference_bound: Fraction
    slack: Fraction


def min_ones_scan(desc, a_range, length):
    """Minimum ones-density over window starts, with witness.

    The report also carries the density reference 1 - d(prefix multiples) -
    tail bound; the scan is compared against it but never asserted (it is a
    statement about all window lengths at once, not about this one).
    """
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    a_lo, a_hi = a_range
    if a_hi < a_lo:
        raise ValueError("empty start range")
    desc.check_window(a_lo, (a_hi - a_lo) + length)
    covering = eta_window(desc, a_lo, (a_hi - a_lo) + length)
    lo, lo_at, _, _ = _kernels.window_extrema(covering.bits, length)
    dens = Fraction(lo, length)
    if desc.has_tail and desc.tail_reciprocal_bound is None:
        # tail reciprocals unbounded (the set need not be thin): no reference
        ref = slack = None
    else:
        tail = desc.tail_reciprocal_bound or Fraction(0)
        ref = (1 - exact_density(desc.prefix) if desc.prefix else Fraction(1)) - tail
        slack = dens - ref
    return OnesScanReport(dens, a_lo + lo_at, length, (a_lo, a_hi), ref, slack)


def tv_distance(d1, d2):
    """Total variation distance of two block distributions of equal n."""
    if d1.n != d2.n:
        raise ValueError("block lengths differ: %d vs %d" % (d1.n, d2.n))
    keys = set(d1.counts) | set(d2.counts)
    return sum((abs(d1.freq(w) - d2.freq(w)) for w in keys), Fraction(0)) / 2


@dataclass(frozen=True)
class TwoMeasureReport:
    level: int
    n: int
    head_window: tuple
    level_window: tuple
    head_ones: Fraction
    level_ones: Fraction
    tv: Fraction
    head_dist: BlockDistribution
    level_dist: BlockDistribution


def two_measure_witness(instance, n, k):
    """Block statistics of eta on [0, T_k) versus [T_k, T_k + L_k).

    A large TV distance between the two empirical distributions witnesses
    that window averages along the two window families separate.
    """
    T, L = instance.window_schedule(k)
    desc = instance.descriptor()
    head = eta_window(desc, 0, T)
    level = eta_window(desc, T, L)
    d_head = block_distribution(head, n)
    d_level = block_distribution(level, n)
    return TwoMeasureReport(
        level=k,
        n=n,
        head_window=(0, T),
        level_window=(T, T + L),
        head_ones=ones_density(head),
        level_ones=ones_density(level),
        tv=tv_distance(d_head, d_level),
        head_dist=d_head,
        level_dist=d_level,
    )
