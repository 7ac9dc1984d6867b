"""Period certificates for free-position sequences and regularity accounting.

A position n is certified against a level (a finite subset S_k with lcm
ell_k and the gcd set {gcd(ell_k, b) : b in the base set}):

  Zero(b): some b in S_k divides n, so the whole class n + ell_k*Z consists
           of multiples and the sequence is 0 there;
  One:     no member of the gcd set divides n; any base element dividing
           some n + j*ell_k would force its gcd with ell_k to divide n,
           so the class is entirely free;
  Undecided: everything else at this level.

Membership of the periodic classes is never decided by scanning all of Z;
only certificates are issued, and the undecided mass is quantified exactly.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import lcm_fold
from .errors import LevelUnavailable
from .multiples import (
    BFreeDescriptor,
    coprime_subset_extract,
    covered_by_primes_check,
    exact_density,
    primitivize,
    quotient_by,
)

ZERO, ONE, UNDECIDED = "zero", "one", "undecided"


@dataclass(frozen=True)
class LevelData:
    """Level k of a base set: S_k, its lcm, and the full gcd set."""

    k: int
    level_set: tuple
    ell: int
    gcd_set: tuple

    def __post_init__(self):
        if self.level_set:
            if self.ell != lcm_fold(self.level_set):
                raise ValueError("ell is not the lcm of the level set")
            if any(self.ell % a != 0 for a in self.gcd_set):
                raise ValueError("gcd set member does not divide ell")
            if not set(self.level_set) <= set(self.gcd_set):
                raise ValueError("level set must sit inside the gcd set")


@dataclass(frozen=True)
class PeriodCertificate:
    position: int
    period: int
    value: int  # 0 or 1; for undecided certificates value is -1
    basis: str  # ZERO | ONE | UNDECIDED
    divisor: int = None  # the dividing b for Zero certificates

    def revalidate(self, level):
        """Recheck the certificate from (position, period, basis) alone."""
        if self.basis == ZERO:
            return (
                self.value == 0
                and self.divisor in level.level_set
                and self.position % self.divisor == 0
                and self.period % self.divisor == 0
            )
        if self.basis == ONE:
            return (
                self.value == 1
                and self.period == level.ell
                and all(self.position % a != 0 for a in level.gcd_set)
            )
        return self.basis == UNDECIDED and self.value == -1


def compute_level(source, k):
    """LevelData for level k of an explicit descriptor or a construction.

    Construction instances provide their own `level_data(k)` (symbolic gcd
    set covering the infinite tail); explicit finite sets take the first k
    prefix elements and gcd against the whole prefix.
    """
    if hasattr(source, "level_data"):
        return source.level_data(k)
    if isinstance(source, BFreeDescriptor):
        if source.has_tail:
            raise LevelUnavailable(
                "descriptor has a tail; levels need the construction certificate"
            )
        prefix = source.prefix
    else:
        prefix = tuple(sorted(set(source)))
    if k > len(prefix):
        raise LevelUnavailable("level %d of a %d-element set" % (k, len(prefix)))
    if k == 0 or not prefix:
        return LevelData(0, (), 1, ())
    from math import gcd

    level_set = prefix[:k]
    ell = lcm_fold(level_set)
    gset = tuple(sorted({gcd(ell, b) for b in prefix}))
    return LevelData(k, level_set, ell, gset)


def certify_position(level, n):
    """Issue the strongest certificate for position n at this level.

    Zero wins over One (a position divisible by a level element cannot be
    coprime to the gcd set anyway); Zero reports the smallest divisor.
    """
    for b in sorted(level.level_set):
        if n % b == 0:
            return PeriodCertificate(n, level.ell, 0, ZERO, divisor=b)
    if all(n % a != 0 for a in level.gcd_set):
        return PeriodCertificate(n, level.ell, 1, ONE)
    return PeriodCertificate(n, level.ell, -1, UNDECIDED)


@dataclass(frozen=True)
class LevelReport:
    k: int
    ell: int
    d_zero: Fraction
    d_one: Fraction
    d_undecided: Fraction


def level_report(level, budget=None):
    """Exact densities of the three certificate classes (they sum to 1).

    All three classes are ell-periodic: zero = multiples of the level set,
    one = complement of the multiples of the gcd set, undecided = the rest.
    """
    kwargs = {} if budget is None else {"budget": budget}
    if not level.level_set:
        return LevelReport(level.k, level.ell, Fraction(0), Fraction(1), Fraction(0))
    d_zero = exact_density(level.level_set, **kwargs)
    d_all = exact_density(level.gcd_set, **kwargs)
    d_one = 1 - d_all
    return LevelReport(level.k, level.ell, d_zero, d_one, d_all - d_zero)


def regularity_profile(source, levels, budget=None):
    """Certified-periodic density (d_zero + d_one) per level, nondecreasing.

    The gap to 1 is the undecided mass; a persistent positive gap across
    levels is the irregularity signature.
    """
    out = []
    for k in levels:
        rep = level_report(compute_level(source, k), budget=budget)
        out.append(rep.d_zero + rep.d_one)
    return out


def irregularity_lower_bound(source, k, budget=None):
    """Exact lower bound for the density escaping the base set at level k.

    d(multiples of the gcd set) minus the reciprocal-sum upper bound for
    the density of the base set's multiples (prefix sum plus the certified
    tail bound). Positive values certify irregularity at this level.
    """
    level = compute_level(source, k)
    desc = source.descriptor() if hasattr(source, "descriptor") else source
    if not isinstance(desc, BFreeDescriptor):
        desc = BFreeDescriptor(prefix=tuple(desc))
    if desc.has_tail and desc.tail_reciprocal_bound is None:
        raise LevelUnavailable("tail present but no tail reciprocal bound certified")
    tail = desc.tail_reciprocal_bound or Fraction(0)
    kwargs = {} if budget is None else {"budget": budget}
    d_gcd = exact_density(level.gcd_set, **kwargs) if level.gcd_set else Fraction(0)
    upper = sum((Fraction(1, b) for b in desc.prefix), Fraction(0)) + tail
    return d_gcd - upper


def strict_irregularity_floor():
    """The level-independent floor under the strict default constants.

    With the default growth and density constants the gcd-set multiples
    keep density >= (1/2)(1 - 1/8) = 7/16 while the base set's multiples
    stay below 1/8 + sum_k 1/(4*3^k) = 1/4, leaving 7/16 - 1/4 = 3/16.
    Exact rational chain, no floats.
    """
    # prod_{j>=2} (1 - 2^-(j+2)) >= 1 - sum_{j>=2} 2^-(j+2) = 1 - 1/8
    gcd_floor = Fraction(1, 2) * (1 - Fraction(1, 8))
    # generator reciprocals: 1/8 + sum_{k>=1} 1/Q_{k+1} with Q_{k+1} >= 4*3^k
    base_ceiling = Fraction(1, 8) + Fraction(1, 4) * Fraction(1, 2)
    floor = gcd_floor - base_ceiling
    assert floor == Fraction(3, 16)
    return floor


@dataclass(frozen=True)
class PrimeCoverVerdict:
    k: int
    skipped: bool
    covered: bool
    primes: tuple
    uncovered_witness: int
    coprime_chain: tuple
    evidence_cap: int


def toeplitz_prime_check(B, ks, prime_cap=10**6):
    """Per-k cover verdicts for the quotient sets of a primitive prefix.

    For each k outside the set, tries to cover B/k by finitely many primes
    (smallest prime factors, all <= prime_cap). Failure reports the maximal
    greedy coprime chain instead. Verdicts carry their evidence cap: they
    speak about the prefix, never about an unseen infinite tail.
    """
    prefix = tuple(sorted(set(B)))
    if primitivize(prefix) != prefix:
        raise ValueError("prefix must be primitive")
    out = {}
    for k in ks:
        if k in prefix:
            out[k] = PrimeCoverVerdict(k, True, False, (), None, (), prime_cap)
            continue
        quot = quotient_by(prefix, k)
        primes = set()
        blocked = None
        for q in quot:
            p = _smallest_prime_factor(q, prime_cap)
            if p is None:
                blocked = q
                break
            primes.add(p)
        if blocked is None:
            covered, witness = covered_by_primes_check(quot, sorted(primes))
            out[k] = PrimeCoverVerdict(
                k, False, covered, tuple(sorted(primes)), witness, (), prime_cap
            )
        else:
            chain = tuple(coprime_subset_extract(quot, len(quot)))
            out[k] = PrimeCoverVerdict(k, False, False, (), blocked, chain, prime_cap)
    return out


def _smallest_prime_factor(q, cap):
    d = 2
    while d * d <= q:
        if q % d == 0:
            return d if d <= cap else None
        d += 1
    return q if q <= cap else None
