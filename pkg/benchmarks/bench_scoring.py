#!/usr/bin/env python3
"""Benchmark the scoring kernel: numba @njit vs the pure-numpy fallback.

Builds synthetic posting lists at DOI-index-like scale and times the
accumulation of SPL term weights over them with both implementations.
Run as:  python benchmarks/bench_scoring.py [--docs N] [--terms K] [--repeat R]
"""

import argparse
import statistics
import time

import numpy as np

from quoka import kernels


def synth_postings(rng, n_docs, n_terms, density):
    """One posting list per term: unique sorted doc ids plus tfs."""
    postings = []
    for _ in range(n_terms):
        hits = max(1, int(n_docs * density * rng.uniform(0.2, 1.8)))
        docs = rng.permutation(n_docs)[:hits].astype(np.int32)
        docs.sort()
        tfs = rng.integers(1, 12, size=docs.size).astype(np.int32)
        postings.append((docs, tfs))
    return postings


def run(impl, postings, lengths, mask, avgdl, n_docs):
    scores = np.zeros(n_docs)
    started = time.perf_counter()
    for i, (docs, tfs) in enumerate(postings):
        lam = 0.02 + 0.9 * (i / max(1, len(postings) - 1))
        impl(docs, tfs, lengths, mask, lam, 1.0, avgdl, scores)
    return time.perf_counter() - started, scores


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=100_000)
    parser.add_argument("--terms", type=int, default=8, help="query terms per run")
    parser.add_argument("--density", type=float, default=0.03,
                        help="mean fraction of docs per posting list")
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(42)
    postings = synth_postings(rng, args.docs, args.terms, args.density)
    lengths = rng.integers(20, 400, size=args.docs).astype(np.int64)
    mask = (rng.random(args.docs) < 0.8).astype(np.uint8)
    avgdl = float(lengths.mean())
    total_hits = sum(d.size for d, _ in postings)
    print(f"{args.docs} docs, {args.terms} terms, {total_hits} postings, "
          f"{args.repeat} repeats")

    impls = [("numpy", kernels.numpy_accumulate)]
    if kernels.HAS_NUMBA:
        kernels.numba_accumulate(*[np.zeros(1, dtype=np.int32)] * 2,
                                 np.ones(1, dtype=np.int64), np.ones(1, dtype=np.uint8),
                                 0.5, 1.0, 1.0, np.zeros(1))  # compile before timing
        impls.append(("numba", kernels.numba_accumulate))
    else:
        print("numba unavailable; timing numpy path only")

    results = {}
    for name, impl in impls:
        times = []
        for _ in range(args.repeat):
            elapsed, scores = run(impl, postings, lengths, mask, avgdl, args.docs)
            times.append(elapsed)
        results[name] = (times, scores)
        print(f"{name:>6}: median {statistics.median(times) * 1e3:8.2f} ms   "
              f"min {min(times) * 1e3:8.2f} ms")

    if len(results) == 2:
        numpy_median = statistics.median(results["numpy"][0])
        numba_median = statistics.median(results["numba"][0])
        diff = float(np.max(np.abs(results["numpy"][1] - results["numba"][1])))
        print(f"speedup (numpy/numba medians): {numpy_median / numba_median:.2f}x")
        print(f"max |score difference|: {diff:.3e}")


if __name__ == "__main__":
    main()
