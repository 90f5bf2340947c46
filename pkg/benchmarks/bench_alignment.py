"""Benchmark the compiled alignment kernels against the pure-Python fallback.

Runs the same percent-identity workload through both backends and reports
wall time and speedup. Usage:

    python benchmarks/bench_alignment.py [--pairs 20000] [--max-len 12] [--seed 0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from botminer import _kernel_py
from botminer import alignment


def make_workload(rng, n_seqs, max_len, alphabet=40):
    seqs = [
        np.array(rng.integers(0, alphabet, rng.integers(1, max_len + 1)), dtype=np.intc)
        for _ in range(n_seqs)
    ]
    return seqs


def flatten(seqs):
    offsets = np.zeros(len(seqs) + 1, dtype=np.int_)
    np.cumsum([len(s) for s in seqs], out=offsets[1:])
    tokens = np.concatenate(seqs).astype(np.intc)
    return tokens, offsets


def run(backend, tokens, offsets, ia, ib, combined):
    out = np.empty(len(ia), dtype=float)
    t0 = time.perf_counter()
    backend.percent_identity_batch(tokens, offsets, ia, ib, combined, out)
    return time.perf_counter() - t0, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=20_000)
    parser.add_argument("--max-len", type=int, default=12)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--mode", choices=("combined", "global"), default="combined"
    )
    args = parser.parse_args()

    if alignment.BACKEND != "cython":
        print("compiled backend not available; nothing to compare")
        return 1
    from botminer import _kernel

    rng = np.random.default_rng(args.seed)
    seqs = make_workload(rng, n_seqs=500, max_len=args.max_len)
    tokens, offsets = flatten(seqs)
    ia = rng.integers(0, len(seqs), args.pairs)
    ib = rng.integers(0, len(seqs), args.pairs)
    combined = args.mode == "combined"

    # Warm-up to exclude import/JIT-ish first-call noise.
    run(_kernel, tokens, offsets, ia[:100], ib[:100], combined)

    t_c, out_c = run(_kernel, tokens, offsets, ia, ib, combined)
    t_p, out_p = run(_kernel_py, tokens, offsets, ia, ib, combined)
    assert np.array_equal(out_c, out_p), "backends disagree"

    rate_c = args.pairs / t_c
    rate_p = args.pairs / t_p
    print(f"pairs: {args.pairs}, max token length: {args.max_len}, mode: {args.mode}")
    print(f"cython backend: {t_c:.3f}s  ({rate_c:,.0f} pairs/s)")
    print(f"python backend: {t_p:.3f}s  ({rate_p:,.0f} pairs/s)")
    print(f"speedup: {t_p / t_c:.1f}x (outputs identical)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
