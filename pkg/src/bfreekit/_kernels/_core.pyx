# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels. Must match `_fallback` exactly, value for value."""

from cpython.bytes cimport PyBytes_FromStringAndSize

BACKEND = "c"


def mark_multiples(Py_ssize_t start, Py_ssize_t length, divisors):
    out = bytearray(length)
    cdef unsigned char[::1] view = out
    cdef Py_ssize_t d, first, i
    for dv in divisors:
        d = dv
        if d <= 0:
            raise ValueError("divisors must be positive, got %r" % (dv,))
        first = (-start) % d
        if first < 0:
            first += d
        for i in range(first, length, d):
            view[i] = 1
    return bytes(out)


def window_extrema(const unsigned char[::1] mask, Py_ssize_t length):
    cdef Py_ssize_t n = mask.shape[0]
    if length < 1 or length > n:
        raise ValueError("window length out of range")
    cdef Py_ssize_t c = 0, lo, hi, lo_at = 0, hi_at = 0, a
    for a in range(length):
        c += mask[a]
    lo = hi = c
    for a in range(1, n - length + 1):
        c += mask[a + length - 1] - mask[a - 1]
        if c < lo:
            lo = c
            lo_at = a
        elif c > hi:
            hi = c
            hi_at = a
    return lo, lo_at, hi, hi_at


def count_max_sweep(const unsigned char[::1] mask, Py_ssize_t windows,
                    Py_ssize_t length_lo, Py_ssize_t length_hi):
    if length_lo < 1 or length_hi < length_lo or windows < 1:
        raise ValueError("bad sweep bounds")
    if mask.shape[0] < windows - 1 + length_hi:
        raise ValueError("mask too short for sweep")
    cdef Py_ssize_t a, off, length, c, best
    counts_obj = bytearray(windows * sizeof(long))
    cdef long[::1] counts = memoryview(counts_obj).cast("l")
    c = 0
    for a in range(length_lo):
        c += mask[a]
    counts[0] = c
    for a in range(1, windows):
        c += mask[a + length_lo - 1] - mask[a - 1]
        counts[a] = c
    best = 0
    for a in range(windows):
        if counts[a] > best:
            best = counts[a]
    maxima = [best]
    for length in range(length_lo + 1, length_hi + 1):
        off = length - 1
        best = 0
        for a in range(windows):
            counts[a] += mask[a + off]
            if counts[a] > best:
                best = counts[a]
        maxima.append(best)
    return maxima


def block_code_counts(const unsigned char[::1] bits, int n, Py_ssize_t start,
                      Py_ssize_t step, Py_ssize_t m):
    if n < 1 or n > 24:
        raise ValueError("block length out of supported range")
    if m < 1:
        raise ValueError("need at least one sample")
    if start < 0 or start + (m - 1) * step + n > bits.shape[0]:
        raise ValueError("samples leave the word")
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    counts_obj = bytearray(size * sizeof(long))
    cdef long[::1] counts = memoryview(counts_obj).cast("l")
    cdef Py_ssize_t j, i, base
    cdef unsigned long code, keep
    if step == 1:
        code = 0
        for i in range(start, start + n):
            code = (code << 1) | bits[i]
        counts[<Py_ssize_t>code] += 1
        keep = ((<unsigned long>1) << (n - 1)) - 1
        for j in range(1, m):
            code = ((code & keep) << 1) | bits[start + j + n - 1]
            counts[<Py_ssize_t>code] += 1
    else:
        for j in range(m):
            base = start + j * step
            code = 0
            for i in range(base, base + n):
                code = (code << 1) | bits[i]
            counts[<Py_ssize_t>code] += 1
    return [counts[i] for i in range(size)]
