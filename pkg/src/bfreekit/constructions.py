"""Builders for the three base-set families, with per-condition certificates.

Every construction materializes finitely many levels and records, for each
of its defining conditions, whether the strict (reference) constants hold
and what the relaxed run actually achieved. Strict constants need primes
far beyond desk scale (the feasibility estimator below says how far), so
relaxed instances are the normal case and their certificates say so
honestly instead of failing silently.

Tail discipline: each instance carries an explicit commitment about every
level it did NOT build (all future primes or interval starts sit above a
recorded floor). That commitment is what makes window operations inside the
horizon exact and reciprocal tail sums boundable.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import exp, gcd, log

from . import _kernels
from .arith import (
    PrimeSet,
    euler_complement,
    euler_density,
    is_prime,
    lcm_fold,
    next_prime_above,
    primes_in_range,
    sieve_cap,
)
from .entropy import Word, edit_word, sample_high_entropy_word
from .errors import (
    CapacityExceeded,
    HypothesisViolated,
    IdentityViolated,
    InfeasibleConstants,
    InfeasibleSchedule,
    LevelUnavailable,
    RangeExceeded,
    WrongMode,
)
from .multiples import (
    BFreeDescriptor,
    count_scan,
    exact_density,
    is_primitive,
    quotient_by,
    sieve_window,
)
from .toeplitz import LevelData

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class ConditionCert:
    """One checked construction condition.

    strict_ok: holds with the strict reference constants; relaxed_ok: holds
    with the constants this run actually used (None when no relaxed target
    exists). required/achieved are printable exact values.
    """

    name: str
    scope: str
    strict_ok: bool
    relaxed_ok: object
    required: str
    achieved: str
    note: str = ""


# ---------------------------------------------------------------------------
# residue addressing (the partition scheme behind the tower construction)


def residue_address(m, depth, t):
    """Address tuple of m at the given depth under the rank-residue scheme.

    Level 1 is all of N (t[0] == 1). If m has 1-based rank r inside its
    depth-d cell, the next coordinate is ((r-1) mod t[d]) + 1 and its rank
    inside that child is (r-1) // t[d] + 1. Cells at every depth partition N
    into infinite sets.
    """
    if depth < 1 or len(t) < depth:
        raise ValueError("need cardinalities for every level up to depth")
    if t[0] != 1:
        raise ValueError("first level cardinality must be 1")
    if m < 1:
        raise ValueError("m must be a positive integer")
    addr = [1]
    rank = m
    for lev in range(2, depth + 1):
        width = t[lev - 1]
        if width < 1:
            raise ValueError("cardinalities must be >= 1")
        addr.append((rank - 1) % width + 1)
        rank = (rank - 1) // width + 1
    return tuple(addr)


def smallest_member_with_address(addr, t, above=0, scan_limit=10**6):
    """Least m > above whose address at depth len(addr) equals addr.

    The cells are infinite, so the scan always terminates for sane bounds;
    a miss below scan_limit signals a broken partition.
    """
    depth = len(addr)
    for m in range(above + 1, above + scan_limit + 1):
        if residue_address(m, depth, t) == tuple(addr):
            return m
    raise RangeExceeded("no member with address %r below %d" % (addr, scan_limit))


# ---------------------------------------------------------------------------
# feasibility estimate


def required_prime_bound(start_above, target_complement):
    """Mertens estimate of the prime bound x needed so that the product of
    (1 - 1/p) over consecutive primes in (start_above, x] drops below the
    target. Returns float('inf') when the bound overflows a float."""
    target = float(target_complement)
    if target <= 0:
        return float("inf")
    if start_above <= 10**6:
        base = 1.0
        for p in primes_in_range(2, max(2, start_above)):
            base *= 1.0 - 1.0 / p
        ln_x = exp(-EULER_GAMMA) / (base * target)
    else:
        ln_x = log(start_above) / target
    if ln_x > 700.0:
        return float("inf")
    return exp(ln_x)


def _consecutive_prime_run(start_above, target_complement, prime_cap):
    """Shortest run of consecutive primes above the bound whose product of
    (1 - 1/p) is <= the target; float-guided, verified exactly."""
    est = required_prime_bound(start_above, target_complement)
    if est > 4.0 * prime_cap:
        raise InfeasibleConstants(
            "prime block above %d needs primes up to about %.3g "
            "(cap %d); relax the constants" % (start_above, est, prime_cap),
            required_bound=est,
        )
    target = Fraction(target_complement)
    run = []
    approx = 1.0
    p = start_above
    while True:
        try:
            p = next_prime_above(p, cap=prime_cap)
        except CapacityExceeded as exc:
            raise InfeasibleConstants(
                "prime run above %d walked past the cap %d before reaching "
                "its density target" % (start_above, prime_cap),
                required_bound=est,
            ) from exc
        run.append(p)
        approx *= 1.0 - 1.0 / p
        if approx <= float(target) * (1.0 + 1e-9):
            if euler_complement(PrimeSet.explicit(run)) <= target:
                return tuple(run)


# ---------------------------------------------------------------------------
# prime tower construction


@dataclass(frozen=True)
class PrimeTowerRecipe:
    depth: int
    deltas: tuple = None  # block density slacks for blocks 2..K; None = strict
    betas: tuple = None  # block growth floors for blocks 2..K; None = strict
    prime_cap: int = None
    future_floor: int = 10**6

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        for name in ("deltas", "betas"):
            val = getattr(self, name)
            if val is not None:
                val = tuple(val)
                if len(val) != self.depth - 1:
                    raise ValueError("%s must cover blocks 2..K" % name)
                object.__setattr__(self, name, val)


@dataclass(frozen=True)
class PrimeTowerInstance:
    """Base set b_1 = 8, b_m = (address product) * Q_m over nested prime blocks.

    blocks[k-1] is the k-th prime block, products[k-1] its product Q_k,
    generators the materialized prefix, lcms[k-1] the level lcm. All tail
    blocks are committed to sit above future_floor.
    """

    recipe: PrimeTowerRecipe
    blocks: tuple
    products: tuple
    sizes: tuple
    generators: tuple
    lcms: tuple
    future_floor: int
    tail_reciprocal_bound: Fraction
    primitive_prefix: bool
    certificates: tuple
    _level_cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def depth(self):
        return len(self.blocks)

    def prime(self, block, index):
        """q with 1-based index inside the 1-based block."""
        return self.blocks[block - 1][index - 1]

    def address_product(self, m, depth):
        addr = residue_address(m, depth, self.sizes[:depth])
        acc = 1
        for j, i in enumerate(addr, start=1):
            acc *= self.prime(j, i)
        return acc

    def descriptor(self):
        return BFreeDescriptor(
            prefix=self.generators,
            horizon=self.future_floor,
            tail=self,
            tail_reciprocal_bound=self.tail_reciprocal_bound,
            primitive=self.primitive_prefix,
        )

    def level_data(self, k):
        """LevelData with the symbolic gcd set covering the infinite tail.

        The gcd set is the level set plus every product of one prime per
        block up to k; each such product really occurs as gcd(ell_k, b_m)
        for infinitely many m, and the materialized prefix is checked
        against that arithmetic fact member by member.
        """
        if not 1 <= k <= self.depth:
            raise LevelUnavailable("level %d of a depth-%d tower" % (k, self.depth))
        if k in self._level_cache:
            return self._level_cache[k]
        combos = 1
        for width in self.sizes[:k]:
            combos *= width
        if combos > 10**5:
            raise CapacityExceeded("gcd set with %d products refused" % combos)
        products = {1}
        for j in range(1, k + 1):
            products = {c * q for c in products for q in self.blocks[j - 1]}
        level_set = self.generators[:k]
        ell = self.lcms[k - 1]
        # materialized generators beyond the level must agree with the
        # address product, and every product must occur for some m > k
        for m in range(k + 1, self.depth + 1):
            got = gcd(ell, self.generators[m - 1])
            want = self.address_product(m, k)
            if got != want:
                raise IdentityViolated(
                    "gcd(ell_%d, b_%d) = %d but the address product is %d"
                    % (k, m, got, want)
                )
        for prod in products:
            addr = self._address_of_product(prod, k)
            # every product must really occur: its cell holds some m > k
            smallest_member_with_address(addr, self.sizes[:k], above=k)
        data = LevelData(
            k, level_set, ell, tuple(sorted(set(level_set) | products))
        )
        self._level_cache[k] = data
        return data

    def _address_of_product(self, prod, k):
        addr = []
        rest = prod
        for j in range(1, k + 1):
            for i, q in enumerate(self.blocks[j - 1], start=1):
                if rest % q == 0:
                    addr.append(i)
                    rest //= q
                    break
            else:
                raise IdentityViolated("product %d misses block %d" % (prod, j))
        return tuple(addr)


def build_prime_tower(recipe):
    """Build a tower instance; certificates mark strict vs relaxed conditions.

    Blocks are chosen as the shortest run of consecutive primes above the
    growth floor whose multiples reach the density target. Strict constants
    are feasible only at depth 1; deeper strict runs raise
    InfeasibleConstants with the estimated prime bound they would need.
    """
    cap = recipe.prime_cap if recipe.prime_cap is not None else sieve_cap()
    blocks = [(2,)]
    products = [2]
    certs = [
        ConditionCert("block_base", "block:1", True, True, "{2}", "{2}"),
        ConditionCert(
            "address_partition",
            "all",
            True,
            True,
            "rank-residue partition",
            "rank-residue partition",
            note="holds by the addressing scheme",
        ),
    ]
    for k in range(2, recipe.depth + 1):
        prev_prod = 1
        for q in products:
            prev_prod *= q
        beta_strict = (k - 1) * 4 * prev_prod
        delta_strict = Fraction(1, 2 ** (k + 2))
        beta_used = beta_strict if recipe.betas is None else recipe.betas[k - 2]
        delta_used = (
            delta_strict if recipe.deltas is None else Fraction(recipe.deltas[k - 2])
        )
        # blocks must stay pairwise disjoint even when the growth floor is
        # relaxed below the previous block's largest prime
        start_above = max(beta_used, blocks[-1][-1])
        run = _consecutive_prime_run(start_above, delta_used, cap)
        blocks.append(run)
        q_k = 1
        for q in run:
            q_k *= q
        products.append(q_k)
        dens = euler_density(PrimeSet.explicit(run))
        certs.append(
            ConditionCert(
                "block_growth",
                "block:%d" % k,
                run[0] > beta_strict,
                run[0] > beta_used,
                "min > %d" % beta_strict,
                "min = %d (floor used %d)" % (run[0], beta_used),
            )
        )
        certs.append(
            ConditionCert(
                "block_density",
                "block:%d" % k,
                dens >= 1 - delta_strict,
                dens >= 1 - delta_used,
                "density >= 1 - %s" % delta_strict,
                "density = %s (slack used %s)" % (dens, delta_used),
            )
        )
    sizes = tuple(len(b) for b in blocks)
    generators = [8]
    for m in range(2, recipe.depth + 1):
        addr = residue_address(m, m - 1, sizes[: m - 1])
        c = 1
        for j, i in enumerate(addr, start=1):
            c *= blocks[j - 1][i - 1]
        generators.append(c * products[m - 1])
    lcms = []
    acc_prod = 1
    for k in range(1, recipe.depth + 1):
        acc_prod *= products[k - 1]
        ell = lcm_fold(generators[:k])
        if ell != 4 * acc_prod:
            raise IdentityViolated(
                "lcm of the first %d generators is %d, expected %d"
                % (k, ell, 4 * acc_prod)
            )
        lcms.append(ell)
    total_prod = acc_prod
    beta_next_strict = recipe.depth * 4 * total_prod
    floor_eff = max(beta_next_strict, recipe.future_floor)
    tail_bound = Fraction(1, floor_eff + 1)
    primitive = is_primitive(generators) and all(s >= 2 for s in sizes[1:])
    return PrimeTowerInstance(
        recipe=recipe,
        blocks=tuple(blocks),
        products=tuple(products),
        sizes=sizes,
        generators=tuple(generators),
        lcms=tuple(lcms),
        future_floor=floor_eff,
        tail_reciprocal_bound=tail_bound,
        primitive_prefix=primitive,
        certificates=tuple(certs),
    )


@dataclass(frozen=True)
class GcdSeparationReport:
    first: int
    second: int
    gcd: int
    structural_bound: int
    structural_ok: bool
    chain_value: int
    chain_ok: object  # None when the strict growth regime does not hold
    strict_regime: bool


def gcd_separation_check(inst, k, r, s):
    """gcd of two deep generators against its structural prime lower bound.

    For 2 <= r < s the gcd of b_{k+r} and b_{k+s} contains the block-(k+r)
    prime addressed by k+s, hence is at least that prime; under the strict
    growth constants it even exceeds (k+1) * ell_{k+1}.
    """
    if not 2 <= r < s:
        raise ValueError("need 2 <= r < s")
    if k < 0 or k + s > inst.depth:
        raise LevelUnavailable("generator index %d beyond depth" % (k + s))
    b_r, b_s = inst.generators[k + r - 1], inst.generators[k + s - 1]
    g = gcd(b_r, b_s)
    addr = residue_address(k + s, k + r, inst.sizes[: k + r])
    q = inst.prime(k + r, addr[k + r - 1])
    structural_ok = g % q == 0 and g >= q
    strict = all(
        c.strict_ok
        for c in inst.certificates
        if c.name == "block_growth" and int(c.scope.split(":")[1]) <= k + s
    )
    chain_value = None
    chain_ok = None
    if k + 1 <= inst.depth:
        chain_value = (k + 1) * inst.lcms[k]
        chain_ok = g > chain_value if strict else None
    return GcdSeparationReport(
        first=b_r,
        second=b_s,
        gcd=g,
        structural_bound=q,
        structural_ok=structural_ok,
        chain_value=chain_value,
        chain_ok=chain_ok,
        strict_regime=strict,
    )


@dataclass(frozen=True)
class WindowBoundReport:
    k: int
    length: int
    max_count: int
    witness: int
    bound: Fraction
    holds: bool
    slack: Fraction


def window_count_bound_check(inst, k, length, a_range):
    """Max window count of the multiples against the level density bound.

    Hypothesis: k * ell_k <= length < (k+1) * ell_{k+1}. The bound is
    length * (d(level multiples) + 4/k + 1/b_{k+1}); relaxed instances may
    fail it, which is reported, not raised.
    """
    if k < 1 or k + 1 > inst.depth:
        raise LevelUnavailable("need level %d and %d materialized" % (k, k + 1))
    ell_k, ell_next = inst.lcms[k - 1], inst.lcms[k]
    if not k * ell_k <= length < (k + 1) * ell_next:
        raise HypothesisViolated(
            "need %d <= length < %d" % (k * ell_k, (k + 1) * ell_next)
        )
    _, _, max_count, witness = count_scan(inst.descriptor(), a_range, length)
    bound = length * (
        exact_density(inst.generators[:k])
        + Fraction(4, k)
        + Fraction(1, inst.generators[k])
    )
    return WindowBoundReport(
        k, length, max_count, witness, bound, Fraction(max_count) <= bound,
        bound - max_count,
    )


def window_count_bound_sweep(inst, k, a_range):
    """window_count_bound_check over every admissible length at level k.

    One covering sieve and an incremental max-count sweep; returns
    (lengths checked, failures as (length, max, bound) triples, worst slack).
    """
    if k < 1 or k + 1 > inst.depth:
        raise LevelUnavailable("need level %d and %d materialized" % (k, k + 1))
    lo = k * inst.lcms[k - 1]
    hi = (k + 1) * inst.lcms[k] - 1
    a_lo, a_hi = a_range
    desc = inst.descriptor()
    desc.check_window(a_lo, (a_hi - a_lo) + hi)
    covering = sieve_window(desc, a_lo, (a_hi - a_lo) + hi)
    maxima = _kernels.count_max_sweep(covering.mask, a_hi - a_lo + 1, lo, hi)
    base = exact_density(inst.generators[:k]) + Fraction(4, k) + Fraction(
        1, inst.generators[k]
    )
    failures = []
    worst = None
    for off, max_count in enumerate(maxima):
        length = lo + off
        bound = length * base
        slack = bound - max_count
        if worst is None or slack < worst[1]:
            worst = (length, slack)
        if Fraction(max_count) > bound:
            failures.append((length, max_count, bound))
    return (hi - lo + 1), failures, worst


# ---------------------------------------------------------------------------
# doubling-interval densities and settling lengths


@dataclass(frozen=True)
class TaggedDensity:
    value: Fraction
    exact: bool
    window: int = None

    @property
    def tag(self):
        return "exact" if self.exact else "estimate(%d)" % self.window


def interval_density(T, exact_max_T=18, estimate_window=10**5, budget=None):
    """Density of the multiples of [T, 2T): exact when T is small enough,
    otherwise a sieve frequency tagged with its window."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if T == 1:
        return TaggedDensity(Fraction(1), True)
    if T <= exact_max_T:
        kwargs = {} if budget is None else {"budget": budget}
        return TaggedDensity(exact_density(range(T, 2 * T), **kwargs), True)
    mask = _kernels.mark_multiples(1, estimate_window, list(range(T, 2 * T)))
    return TaggedDensity(
        Fraction(sum(mask), estimate_window), False, estimate_window
    )


@dataclass(frozen=True)
class SettlingCert:
    T: int
    length: int
    density: Fraction
    vacuous: bool
    window_cap: int
    scan_cap: int

    def doubled_density(self):
        return 2 * self.density


def settling_length(T, window_cap=512, scan_cap=20000, exact_max_T=18):
    """Scanned length beyond which the interval multiples stay under twice
    their density.

    Certifies: for every scanned start a in [1, scan_cap] and every length
    l with cert.length < l <= window_cap, the window count is < 2 e(T) l.
    When 2 e(T) > 1 this is vacuous and the certificate says so. Bounded
    evidence only; the scan ranges are part of the certificate.
    """
    e = interval_density(T, exact_max_T=exact_max_T)
    if not e.exact:
        raise CapacityExceeded("settling length needs the exact density")
    two_e = 2 * e.value
    if two_e > 1:
        return SettlingCert(T, 1, e.value, True, window_cap, scan_cap)
    mask = _kernels.mark_multiples(1, scan_cap + window_cap, list(range(T, 2 * T)))
    maxima = _kernels.count_max_sweep(mask, scan_cap, 1, window_cap)
    worst = 0
    for off, max_count in enumerate(maxima):
        length = 1 + off
        if Fraction(max_count) >= two_e * length:
            worst = length
    if worst >= window_cap:
        raise CapacityExceeded(
            "no settling length below the window cap %d for T=%d" % (window_cap, T)
        )
    return SettlingCert(T, max(worst, 1), e.value, False, window_cap, scan_cap)


# ---------------------------------------------------------------------------
# interval-union construction (density oscillation)


@dataclass(frozen=True)
class BesicovitchRecipe:
    eps: Fraction
    eps_schedule: tuple
    depth: int
    t_search_cap: int = 64
    window_cap: int = 512
    scan_cap: int = 20000
    exact_max_T: int = 18
    estimate_window: int = 10**5
    future_floor: int = 10**6

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        sched = tuple(Fraction(e) for e in self.eps_schedule)
        if len(sched) < self.depth:
            raise ValueError("schedule shorter than depth")
        object.__setattr__(self, "eps_schedule", sched)


@dataclass(frozen=True)
class ChainReport:
    """Front-window density of the union's multiples against the schedule."""

    head: int
    measured: Fraction
    per_level: tuple  # (T_j, count in [1, head), 2 e(T_j) * head)
    sum_counts: int
    sum_density_bound: Fraction
    sum_schedule_bound: Fraction
    eps: Fraction
    count_le_density_bound: bool
    density_le_schedule: bool
    schedule_lt_eps: bool


@dataclass(frozen=True)
class BesicovitchInstance:
    recipe: BesicovitchRecipe
    starts: tuple  # T_1..T_K
    settling: tuple  # SettlingCert per chosen T (for T_0..T_{K-1})
    e_table: tuple  # TaggedDensity per level
    g_prefix: tuple
    future_floor: int
    certificates: tuple
    chain: ChainReport

    def descriptor(self):
        return BFreeDescriptor(
            prefix=self.g_prefix,
            horizon=self.future_floor - 1,
            tail=self,
            tail_reciprocal_bound=None,
            primitive=True,
        )

    def window_schedule(self, k):
        if not 1 <= k <= len(self.starts):
            raise LevelUnavailable("level %d not materialized" % k)
        return self.starts[k - 1], self.starts[k - 1]


def _interval_union_prefix(starts):
    """Members of each [T_k, 2 T_k) not hit by earlier interval multiples."""
    out = []
    for idx, T in enumerate(starts):
        earlier = []
        for S in starts[:idx]:
            earlier.extend(range(S, 2 * S))
        mask = _kernels.mark_multiples(T, T, earlier) if earlier else bytes(T)
        out.extend(T + i for i in range(T) if not mask[i])
    return tuple(sorted(set(out)))


def build_besicovitch(recipe):
    """Greedy interval-union instance: each start is the smallest admissible
    T beyond the previous settling length with density below its slot.

    The strict schedule constraints (eps < 1/4, sum eps_i < eps/2) are
    recorded, not enforced; desk-scale runs need relaxed slots because the
    interval density decays extremely slowly.
    """
    starts = []
    settles = []
    e_entries = []
    certs = [
        ConditionCert(
            "epsilon_budget",
            "schedule",
            recipe.eps < Fraction(1, 4)
            and sum(recipe.eps_schedule[: recipe.depth]) < recipe.eps / 2,
            True,
            "eps < 1/4 and sum eps_i < eps/2",
            "eps = %s, partial sum = %s"
            % (recipe.eps, sum(recipe.eps_schedule[: recipe.depth])),
            note="strict flags only; relaxed schedules allowed",
        )
    ]
    prev_T = 1
    for k in range(1, recipe.depth + 1):
        settle = settling_length(
            prev_T,
            window_cap=recipe.window_cap,
            scan_cap=recipe.scan_cap,
            exact_max_T=recipe.exact_max_T,
        )
        settles.append(settle)
        slot = recipe.eps_schedule[k - 1]
        T = max(prev_T + 1, settle.length + 1)
        chosen = None
        while T <= recipe.t_search_cap:
            e = interval_density(
                T,
                exact_max_T=recipe.exact_max_T,
                estimate_window=recipe.estimate_window,
            )
            if e.value < slot:
                chosen = (T, e)
                break
            T += 1
        if chosen is None:
            raise InfeasibleSchedule(
                "no T <= %d with interval density < %s (the density decays "
                "too slowly for smaller slots at desk scale)"
                % (recipe.t_search_cap, slot),
                needed_beyond=recipe.t_search_cap,
            )
        T, e = chosen
        starts.append(T)
        e_entries.append(e)
        certs.append(
            ConditionCert(
                "interval_schedule",
                "level:%d" % k,
                e.exact and e.value < slot,
                e.value < slot,
                "T > settling(%d) = %d and e(T) < %s" % (prev_T, settle.length, slot),
                "T = %d, e = %s [%s]" % (T, e.value, e.tag),
            )
        )
        prev_T = T
    g_prefix = _interval_union_prefix(starts)
    head = starts[-1]
    floor_eff = max(2 * starts[-1], recipe.future_floor)
    # chain report on [1, head)
    per_level = []
    sum_counts = 0
    sum_density_bound = Fraction(0)
    for T, e in zip(starts[:-1], e_entries[:-1]):
        mask = _kernels.mark_multiples(1, head - 1, list(range(T, 2 * T)))
        c = sum(mask)
        per_level.append((T, c, 2 * e.value * head))
        sum_counts += c
        sum_density_bound += 2 * e.value * head
    union_mask = _kernels.mark_multiples(1, head - 1, list(g_prefix))
    measured = Fraction(sum(union_mask), head)
    schedule_bound = sum(
        (2 * s for s in recipe.eps_schedule[: recipe.depth]), Fraction(0)
    )
    chain = ChainReport(
        head=head,
        measured=measured,
        per_level=tuple(per_level),
        sum_counts=sum_counts,
        sum_density_bound=sum_density_bound,
        sum_schedule_bound=schedule_bound,
        eps=recipe.eps,
        count_le_density_bound=Fraction(sum_counts) <= sum_density_bound,
        density_le_schedule=sum_density_bound <= schedule_bound * head,
        schedule_lt_eps=schedule_bound < recipe.eps,
    )
    return BesicovitchInstance(
        recipe=recipe,
        starts=tuple(starts),
        settling=tuple(settles),
        e_table=tuple(e_entries),
        g_prefix=g_prefix,
        future_floor=floor_eff,
        certificates=tuple(certs),
        chain=chain,
    )

# ---------------------------------------------------------------------------
# entropy-seeded construction (words planted inside scheduled windows)


@dataclass(frozen=True)
class EntropySeededRecipe:
    eps: Fraction
    gamma: Fraction
    kappa: Fraction
    block_n: int
    mode: str  # "equal" (T_k = L_k) or "thin" (T_k = k^2 L_k)
    depth: int
    eps_schedule: tuple
    seed: int
    word_attempts: int = 64
    cover_budget: int = 0  # extra primes per cover beyond the core
    cover_prime_cap: int = 10**5
    cover_core_closed: bool = False  # include p == 2T_k in the core when prime
    spread_scan: int = 8
    t_search_cap: int = 4096
    window_cap: int = 512
    scan_cap: int = 20000
    exact_max_T: int = 18
    estimate_window: int = 10**5
    future_floor: int = 10**6

    def __post_init__(self):
        for name in ("eps", "gamma", "kappa"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        sched = tuple(Fraction(e) for e in self.eps_schedule)
        if len(sched) < self.depth:
            raise ValueError("schedule shorter than depth")
        object.__setattr__(self, "eps_schedule", sched)
        if self.mode not in ("equal", "thin"):
            raise ValueError("mode must be 'equal' or 'thin'")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not (self.eps < self.gamma <= Fraction(1, 2) - self.eps):
            raise ValueError("gamma must lie in (eps, 1/2 - eps]")
        if not 0 < self.kappa < self.eps:
            raise ValueError("kappa must lie in (0, eps)")


@dataclass(frozen=True)
class SeededLevel:
    k: int
    T: int
    L: int
    settling: SettlingCert
    e_entry: TaggedDensity
    word: Word
    word_cert: object
    sites: tuple        # absolute one-positions of the word inside the window
    generators: tuple   # sites minus excluded positions
    new_elements: tuple # generators not already multiples of earlier ones


@dataclass(frozen=True)
class EntropySeededInstance:
    """Base set built by planting word one-positions inside [T_k, T_k+L_k).

    covers[j] (1-based j < T_K) is the prime cover attached to index j; the
    exclusion set collects every n with a divisor j whose cofactor is
    cover-free and > 1, and generator sites are kept out of it. Windows of
    different levels are disjoint and all future levels are committed to
    start at or above future_floor.
    """

    recipe: EntropySeededRecipe
    levels: tuple
    covers: dict
    cover_certs: tuple
    spread_certs: tuple
    prefix: tuple
    future_floor: int
    certificates: tuple

    @property
    def depth(self):
        return len(self.levels)

    @property
    def exclusion_range_max(self):
        return 2 * self.levels[-1].T - 1

    def descriptor(self):
        thin = self.recipe.mode == "thin"
        return BFreeDescriptor(
            prefix=self.prefix,
            horizon=self.future_floor - 1,
            tail=self,
            tail_reciprocal_bound=Fraction(1, self.depth) if thin else None,
            primitive=True,
        )

    def window_schedule(self, k):
        if not 1 <= k <= self.depth:
            raise LevelUnavailable("level %d not materialized" % k)
        lev = self.levels[k - 1]
        return lev.T, lev.L


def _cover_free(n, cover):
    """True when no prime of the cover divides n."""
    for p in cover.iter_primes():
        if p > n:
            break
        if n % p == 0:
            return False
    return True


def exclusion_membership(inst, n):
    """(member, witness): n has a divisor j < T_K with cover-free cofactor > 1.

    Exact for n <= 2*T_K - 1: any divisor j >= T_K of such n forces
    cofactor 1. Beyond that range the unmaterialized covers could matter,
    so the query refuses.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > inst.exclusion_range_max:
        raise RangeExceeded(
            "exclusion set only decidable up to %d" % inst.exclusion_range_max
        )
    for j in range(1, n + 1):
        if n % j:
            continue
        cover = inst.covers.get(j)
        if cover is None:
            continue
        cofactor = n // j
        if cofactor != 1 and _cover_free(cofactor, cover):
            return True, j
    return False, None


def _build_cover(j, level_T, recipe):
    """Cover for index j at a level with window start level_T: a core of all
    primes below 2*level_T plus a density-driven extension within budget."""
    bound = 2 * level_T
    core_max = bound if recipe.cover_core_closed and is_prime(bound) else bound - 1
    cover = PrimeSet(intervals=((2, core_max),)) if core_max >= 2 else PrimeSet()
    required = recipe.eps * Fraction(1, 2 ** (j + 1))
    achieved = euler_complement(cover) / j
    extras = []
    p = core_max
    while achieved >= required and len(extras) < recipe.cover_budget:
        try:
            p = next_prime_above(p, cap=recipe.cover_prime_cap)
        except CapacityExceeded:
            break
        extras.append(p)
        achieved = achieved * Fraction(p - 1, p)
    if extras:
        cover = cover.union_extras(extras)
    cert = ConditionCert(
        "cover_density",
        "j:%d" % j,
        achieved < required,
        None,
        "< %s" % required,
        "%s" % achieved,
        note="" if achieved < required else "budget exhausted before target",
    )
    return cover, cert


def _weight_window_nonempty(L, gamma, eps):
    lo = (gamma + eps / 2) * L
    hi = (gamma + eps) * L
    k = int(lo) + 1
    if Fraction(k) <= lo:
        k += 1
    return Fraction(k) < hi


def build_entropy_seeded(recipe):
    """Build the word-seeded instance level by level.

    Per level: find the smallest admissible window (past the settling
    length, disjoint from the previous window, density slot satisfied, a
    samplable word weight), sample the word, attach covers for the new
    indices, then keep the word's sites that avoid the exclusion set and
    are not multiples of earlier generators.
    """
    levels = []
    covers = {}
    cover_certs = []
    spread_certs = []
    certs = [
        ConditionCert(
            "epsilon_budget",
            "schedule",
            recipe.eps < Fraction(1, 4)
            and sum(recipe.eps_schedule[: recipe.depth]) < recipe.eps / 2,
            True,
            "eps < 1/4 and sum eps_i < eps/2",
            "eps = %s, partial sum = %s"
            % (recipe.eps, sum(recipe.eps_schedule[: recipe.depth])),
            note="strict flags only; relaxed schedules allowed",
        )
    ]
    prefix = []
    gens_so_far = []
    prev_T, prev_end = 1, 1
    for k in range(1, recipe.depth + 1):
        settle = settling_length(
            prev_T,
            window_cap=recipe.window_cap,
            scan_cap=recipe.scan_cap,
            exact_max_T=recipe.exact_max_T,
        )
        slot = recipe.eps_schedule[k - 1]
        seed_k = recipe.seed * 1000003 + k
        chosen = None
        L = settle.length + 1
        while True:
            T = L if recipe.mode == "equal" else k * k * L
            if T > recipe.t_search_cap:
                raise InfeasibleSchedule(
                    "no admissible window start below %d at level %d"
                    % (recipe.t_search_cap, k),
                    needed_beyond=recipe.t_search_cap,
                )
            if T >= max(prev_end, prev_T + 1) and _weight_window_nonempty(
                L, recipe.gamma, recipe.eps
            ):
                e = interval_density(
                    T,
                    exact_max_T=recipe.exact_max_T,
                    estimate_window=recipe.estimate_window,
                )
                if e.value < slot:
                    try:
                        word, wcert = sample_high_entropy_word(
                            L,
                            recipe.gamma,
                            recipe.eps,
                            recipe.block_n,
                            recipe.kappa,
                            seed_k,
                            max_attempts=recipe.word_attempts,
                        )
                        chosen = (T, L, e, word, wcert)
                        break
                    except (ExhaustedAttempts, ValueError):
                        pass
            L += 1
        T, L, e, word, wcert = chosen
        certs.append(
            ConditionCert(
                "interval_schedule",
                "level:%d" % k,
                e.exact and e.value < slot and T >= L and L > settle.length,
                e.value < slot and T >= L and L > settle.length,
                "T >= L > settling(%d) = %d, e(T) < %s"
                % (prev_T, settle.length, slot),
                "T = %d, L = %d, e = %s [%s]" % (T, L, e.value, e.tag),
            )
        )
        # covers for the new index range [prev_T, T)
        for j in range(prev_T, T):
            cover, ccert = _build_cover(j, T, recipe)
            covers[j] = cover
            cover_certs.append(ccert)
        cover_certs.append(
            ConditionCert(
                "cover_core",
                "level:%d" % k,
                True,
                True,
                "covers for j in [%d, %d) contain all primes < %d"
                % (prev_T, T, 2 * T),
                "core interval [2, %d]" % (2 * T - 1),
            )
        )
        # spread evidence for the established covers
        for j in range(1, prev_T):
            d_j = euler_complement(covers[j]) / j
            worst = Fraction(0)
            ok = True
            for T_probe in range(T, T + recipe.spread_scan):
                cnt = 0
                m_lo = (T_probe + j - 1) // j
                m_hi = (2 * T_probe - 1) // j
                for m in range(m_lo, m_hi + 1):
                    if m != 1 and _cover_free(m, covers[j]):
                        cnt += 1
                bound = 2 * d_j * T_probe
                if Fraction(cnt) > bound:
                    ok = False
                if bound > 0:
                    worst = max(worst, Fraction(cnt) / bound)
            spread_certs.append(
                ConditionCert(
                    "early_cover_spread",
                    "level:%d,j:%d" % (k, j),
                    ok,
                    ok,
                    "window counts <= 2 d(j . cover-free) T, T in [%d, %d)"
                    % (T, T + recipe.spread_scan),
                    "worst ratio %s" % worst,
                    note="bounded scan evidence",
                )
            )
        sites = tuple(T - 1 + i for i in sorted(word.ones_positions()))
        generators = []
        for x in sites:
            excluded = False
            for j in range(1, min(x, T) + 1):
                if x % j:
                    continue
                cover = covers.get(j)
                if cover is None:
                    continue
                cof = x // j
                if cof != 1 and _cover_free(cof, cover):
                    excluded = True
                    break
            if not excluded:
                generators.append(x)
        new_elements = []
        for x in generators:
            if not any(x % g == 0 for g in gens_so_far):
                new_elements.append(x)
        levels.append(
            SeededLevel(
                k=k,
                T=T,
                L=L,
                settling=settle,
                e_entry=e,
                word=word,
                word_cert=wcert,
                sites=sites,
                generators=tuple(generators),
                new_elements=tuple(new_elements),
            )
        )
        gens_so_far.extend(generators)
        prefix.extend(new_elements)
        prev_T, prev_end = T, T + L
    floor_eff = max(2 * prev_end, recipe.future_floor)
    inst = EntropySeededInstance(
        recipe=recipe,
        levels=tuple(levels),
        covers=covers,
        cover_certs=tuple(cover_certs),
        spread_certs=tuple(spread_certs),
        prefix=tuple(sorted(prefix)),
        future_floor=floor_eff,
        certificates=tuple(certs),
    )
    if not is_primitive(inst.prefix):
        raise IdentityViolated("seeded prefix lost primitivity")
    bad = [b for b in inst.prefix if exclusion_membership(inst, b)[0]]
    if bad:
        raise IdentityViolated("prefix meets the exclusion set at %s" % bad)
    return inst


@dataclass(frozen=True)
class WindowIdentityReport:
    k: int
    window: tuple
    deletions: tuple
    insertions: tuple
    members: tuple
    ok: bool


def window_corrections(inst, k):
    """1-based (deletions, insertions) for the level-k window.

    Deletions: excluded positions inside the window. Insertions: positions
    that are multiples of earlier generators but not surviving word sites.
    """
    lev = inst.levels[k - 1]
    T, L = lev.T, lev.L
    earlier = []
    for prev in inst.levels[: k - 1]:
        earlier.extend(prev.generators)
    carry_mask = _kernels.mark_multiples(T, L, earlier) if earlier else bytes(L)
    site_set = set(lev.sites)
    deletions = []
    insertions = []
    for off in range(L):
        x = T + off
        excluded = exclusion_membership(inst, x)[0]
        if excluded:
            deletions.append(off + 1)
        if carry_mask[off] and not (x in site_set and not excluded):
            insertions.append(off + 1)
    return tuple(deletions), tuple(insertions)


def window_word_identity_check(inst, k):
    """Exact set identity: the multiples of the base set on the level-k
    window equal the one-positions of the edited word.

    The strongest structural test of the build: it ties the sieve over the
    full prefix to the word-with-corrections picture position by position.
    Raises IdentityViolated on any mismatch.
    """
    if not 1 <= k <= inst.depth:
        raise LevelUnavailable("level %d not materialized" % k)
    lev = inst.levels[k - 1]
    T, L = lev.T, lev.L
    deletions, insertions = window_corrections(inst, k)
    surviving = {i for i in lev.word.ones_positions() if i not in set(deletions)}
    clash = set(insertions) & surviving
    if clash:
        raise IdentityViolated("insertions meet surviving sites at %s" % sorted(clash))
    edited = edit_word(lev.word, deletions, insertions)
    rhs = {T - 1 + i for i in edited.ones_positions()}
    lhs = set(sieve_window(inst.descriptor(), T, L).members())
    ok = lhs == rhs
    if not ok:
        raise IdentityViolated(
            "window %r: sieve gives %s, edited word gives %s"
            % ((T, T + L), sorted(lhs - rhs), sorted(rhs - lhs))
        )
    return WindowIdentityReport(
        k, (T, T + L), deletions, insertions, tuple(sorted(lhs)), ok
    )


@dataclass(frozen=True)
class CorrectionSizeReport:
    k: int
    excluded_count: int
    excluded_bound: Fraction
    excluded_ok: bool
    carry_count: int
    carry_bound: Fraction
    carry_ok: bool


def correction_size_check(inst, k):
    """Measured correction sizes against eps * L and 2 eps * L.

    Relaxed instances may exceed the bounds (small covers leave more
    exclusions); reported, never raised.
    """
    lev = inst.levels[k - 1]
    deletions, insertions = window_corrections(inst, k)
    eps, L = inst.recipe.eps, lev.L
    return CorrectionSizeReport(
        k=k,
        excluded_count=len(deletions),
        excluded_bound=eps * L,
        excluded_ok=len(deletions) <= eps * L,
        carry_count=len(insertions),
        carry_bound=2 * eps * L,
        carry_ok=len(insertions) <= 2 * eps * L,
    )


def structure_checks(inst, window_to=None):
    """The structural suite; every entry must pass on a sound instance.

    Returns a list of (name, ok, detail). Checks: prefix primitivity, the
    prefix avoiding the exclusion set, quotient covers for every index
    outside the prefix, the level identity between accumulated multiples
    and per-level generator multiples, containment in the interval-union
    multiples, and the window sites being covered by the multiples.
    """
    results = []
    prefix = inst.prefix
    results.append(("prefix_primitive", is_primitive(prefix), "%d elements" % len(prefix)))
    bad = [b for b in prefix if exclusion_membership(inst, b)[0]]
    results.append(("prefix_avoids_exclusion", not bad, "hits: %s" % bad))
    # quotient covers: every j in [1, T_K) outside the prefix
    T_top = inst.levels[-1].T
    uncovered = []
    for j in range(1, T_top):
        if j in prefix:
            continue
        quot = quotient_by(prefix, j)
        cover = inst.covers.get(j)
        if cover is None:
            if quot:
                uncovered.append((j, "no cover"))
            continue
        for q in quot:
            if q == 1 or _cover_free(q, cover):
                uncovered.append((j, q))
    results.append(("quotient_covers", not uncovered, "failures: %s" % uncovered[:5]))
    # indices j >= T_K: a divisor that deep forces quotient 1, so nothing to check
    hi = window_to or 2 * T_top
    gens_up_to = []
    new_up_to = []
    for n in range(1, inst.depth + 1):
        lev = inst.levels[n - 1]
        gens_up_to.extend(lev.generators)
        new_up_to.extend(lev.new_elements)
        lhs = _kernels.mark_multiples(0, hi, new_up_to) if new_up_to else bytes(hi)
        rhs = _kernels.mark_multiples(0, hi, gens_up_to) if gens_up_to else bytes(hi)
        same = lhs == rhs
        results.append(
            (
                "level_multiples_identity:%d" % n,
                same,
                "window [0, %d)" % hi,
            )
        )
    interval_divisors = []
    for lev in inst.levels:
        interval_divisors.extend(range(lev.T, 2 * lev.T))
    m_b = _kernels.mark_multiples(0, hi, prefix) if prefix else bytes(hi)
    m_g = _kernels.mark_multiples(0, hi, interval_divisors)
    contained = all(not b or g for b, g in zip(m_b, m_g))
    results.append(("multiples_inside_interval_union", contained, "window [0, %d)" % hi))
    for lev in inst.levels:
        window_members = set(
            sieve_window(inst.descriptor(), lev.T, lev.L).members()
        )
        wanted = set(lev.generators)  # sites minus exclusions
        ok = wanted <= window_members
        results.append(
            ("sites_covered_by_multiples:%d" % lev.k, ok, "level %d" % lev.k)
        )
    return results


@dataclass(frozen=True)
class ReciprocalSumReport:
    prefix_sum: Fraction
    tail_bound: Fraction
    chain_floor: Fraction
    holds: bool
    chain_float: float


def reciprocal_sum_report(inst, chain_terms=40):
    """Thin-mode reciprocal sum against the convergent chain value.

    Exact prefix sum plus the tail bound sum_{k>K} L_k/T_k = sum 1/k^2 <
    1/K, compared with a rational lower bound of 1 + sum log(1 + 1/k^2)
    via log(1+x) > x - x^2/2. The inequality is asserted exactly; the
    float value of the chain is reported for context only.
    """
    if inst.recipe.mode != "thin":
        raise WrongMode("reciprocal sum chain needs the thin schedule")
    prefix_sum = sum((Fraction(1, b) for b in inst.prefix), Fraction(0))
    tail_bound = Fraction(1, inst.depth)
    chain_floor = Fraction(1)
    for k in range(1, chain_terms + 1):
        x = Fraction(1, k * k)
        chain_floor += x - x * x / 2
    chain_float = 1.0 + sum(log(1.0 + 1.0 / (k * k)) for k in range(1, 10000))
    return ReciprocalSumReport(
        prefix_sum=prefix_sum,
        tail_bound=tail_bound,
        chain_floor=chain_floor,
        holds=prefix_sum + tail_bound < chain_floor,
        chain_float=chain_float,
    )
