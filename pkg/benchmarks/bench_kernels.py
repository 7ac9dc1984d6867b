#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python fallback.

Covers the three hot loops: window sieving, min/max window scans, and the
incremental max-count sweep that dominates the structural bound checks.
Run `python3 benchmarks/bench_kernels.py [--quick]`.
"""

import sys
import time

from bfreekit._kernels import load_backend


def timed(fn, *args, repeats=3):
    best = None
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main():
    quick = "--quick" in sys.argv
    scale = 1 if quick else 4
    backends = {"py": load_backend("py")}
    try:
        backends["c"] = load_backend("c")
    except ImportError:
        print("compiled backend unavailable; benchmarking fallback only")

    cases = []
    length = 250_000 * scale
    divisors = [8, 30, 462, 9240, 17, 101, 997]
    cases.append(("mark_multiples (%.1e cells)" % length,
                  lambda k: k.mark_multiples(1, length, divisors)))

    ref = backends["py"].mark_multiples(1, length, divisors)
    cases.append(("window_extrema (L=120)",
                  lambda k: k.window_extrema(ref, 120)))

    sweep_mask = ref[: 60_000 * scale]
    windows = len(sweep_mask) - 2000
    cases.append(("count_max_sweep (L in [240, 2000))",
                  lambda k: k.count_max_sweep(sweep_mask, windows, 240, 1999)))

    bits = bytes(b & 1 for b in ref[: 100_000 * scale])
    cases.append(("block_code_counts (n=4, overlapping)",
                  lambda k: k.block_code_counts(bits, 4, 0, 1, len(bits) - 3)))

    print("%-38s" % "kernel" + "".join("%12s" % name for name in backends))
    for label, call in cases:
        times = {}
        results = {}
        for name, mod in backends.items():
            times[name], results[name] = timed(call, mod, repeats=2 if quick else 3)
        line = "%-38s" % label + "".join("%10.1fms" % (times[n] * 1e3) for n in backends)
        if len(results) == 2 and results["py"] != results["c"]:
            line += "   MISMATCH"
        elif len(times) == 2:
            line += "   x%.1f" % (times["py"] / times["c"])
        print(line)


if __name__ == "__main__":
    main()
