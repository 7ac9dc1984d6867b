"""Pure-Python kernels. Semantics are the contract; `_core.pyx` mirrors them.

All masks are bytes-like with one byte per position, value 0 or 1.
"""

from itertools import accumulate

BACKEND = "py"


def mark_multiples(start, length, divisors):
    """Mask of length `length` with mask[i] = 1 iff some d divides start+i.

    Divisors must be positive. Position values may be negative; 0 counts as
    a multiple of every divisor.
    """
    out = bytearray(length)
    one = b"\x01"
    for d in divisors:
        if d <= 0:
            raise ValueError("divisors must be positive, got %r" % (d,))
        first = (-start) % d
        if first >= length:
            continue
        n = (length - 1 - first) // d + 1
        out[first::d] = one * n
    return bytes(out)


def window_extrema(mask, length):
    """(min, argmin, max, argmax) of window sums over all offsets.

    Windows are mask[a : a+length] for a in 0..len(mask)-length; ties keep
    the smallest offset.
    """
    n = len(mask)
    if not 1 <= length <= n:
        raise ValueError("window length out of range")
    prefix = list(accumulate(mask, initial=0))
    lo = hi = prefix[length]
    lo_at = hi_at = 0
    for a in range(1, n - length + 1):
        c = prefix[a + length] - prefix[a]
        if c < lo:
            lo, lo_at = c, a
        elif c > hi:
            hi, hi_at = c, a
    return lo, lo_at, hi, hi_at


def count_max_sweep(mask, windows, length_lo, length_hi):
    """Max window sum per length, for lengths length_lo..length_hi inclusive.

    Considers `windows` window starts (offsets 0..windows-1); the mask must
    cover windows-1+length_hi positions. Returns a list of maxima.
    """
    if length_lo < 1 or length_hi < length_lo or windows < 1:
        raise ValueError("bad sweep bounds")
    if len(mask) < windows - 1 + length_hi:
        raise ValueError("mask too short for sweep")
    prefix = list(accumulate(mask, initial=0))
    counts = [prefix[a + length_lo] - prefix[a] for a in range(windows)]
    maxima = [max(counts)]
    for length in range(length_lo + 1, length_hi + 1):
        off = length - 1
        for a in range(windows):
            counts[a] += mask[a + off]
        maxima.append(max(counts))
    return maxima


def block_code_counts(bits, n, start, step, m):
    """Counts of n-bit block codes over m samples at start, start+step, ...

    Codes read the block big-endian (bits[i] is the high bit). Returns a
    list of length 2**n.
    """
    if n < 1 or n > 24:
        raise ValueError("block length out of supported range")
    if m < 1:
        raise ValueError("need at least one sample")
    if start < 0 or start + (m - 1) * step + n > len(bits):
        raise ValueError("samples leave the word")
    counts = [0] * (1 << n)
    if step == 1:
        code = 0
        top = 1 << (n - 1)
        for i in range(start, start + n):
            code = (code << 1) | bits[i]
        counts[code] = 1
        for j in range(1, m):
            code = ((code & (top - 1)) << 1) | bits[start + j + n - 1]
            counts[code] += 1
    else:
        for j in range(m):
            base = start + j * step
            code = 0
            for i in range(base, base + n):
                code = (code << 1) | bits[i]
            counts[code] += 1
    return counts
