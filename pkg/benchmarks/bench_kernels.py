#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Covers the hot paths behind `permanent`, `classify_vanishing` and
`survey`: single permanents, batched permanents, and the vanishing
sweeps.  Both implementations must agree; this script also re-checks
that on the benchmarked inputs.
"""

import argparse
import time

import numpy as np

from prodvec import _purekernels

try:
    from prodvec import _kernels
except ImportError:
    _kernels = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled extension not built; showing pure-python timings only")
    backends = [("pure", _purekernels)] + ([("compiled", _kernels)] if _kernels else [])

    rng = np.random.Generator(np.random.Philox(key=[1, 0]))
    single = (2 * rng.integers(0, 2, size=(12, 12)) - 1).astype(np.int8)
    batch = (2 * rng.integers(0, 2, size=(20000, 8, 8)) - 1).astype(np.int8)

    workloads = [
        ("permanent 12x12 (x1000)", lambda k: [k.ryser_permanent(single) for _ in range(1000)]),
        ("batch permanent 20000 x 8x8", lambda k: k.batch_permanent(batch)),
        ("exhaustive vanishing sweep n=4", lambda k: k.find_vanishing(4, False)),
        ("normalized vanishing sweep n=5", lambda k: k.find_vanishing(5, True)),
    ]

    print(f"{'workload':<34} " + " ".join(f"{name:>12}" for name, _ in backends))
    reference: dict[str, object] = {}
    for label, work in workloads:
        cells = []
        for name, kern in backends:
            best, result = timeit(lambda k=kern: work(k), args.repeat)
            cells.append(f"{best * 1e3:10.1f}ms")
            if label in reference:
                same = np.array_equal(np.asarray(reference[label]), np.asarray(result))
                assert same, f"backend disagreement on {label}"
            else:
                reference[label] = result
        print(f"{label:<34} " + " ".join(cells))


if __name__ == "__main__":
    main()
