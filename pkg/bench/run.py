"""Run ipdsaw benchmarks. Usage: python -m bench.run [bench_name] [options]."""

from __future__ import annotations

import sys
import time

from ipdsaw.ipsaw import enumerate_family
from ipdsaw.partition import dp_log_Z_sequence, walk_table
from ipdsaw.sampler import sample_exact, sample_mcmc
from ipdsaw.util import make_rng
from ipdsaw.walk import make_params


def bench_dp(length: int = 2048, verbose: bool = True) -> float:
    """Time log Z_1..Z_L by the stretch DP at beta = 1. Returns elapsed seconds."""
    t0 = time.perf_counter()
    dp_log_Z_sequence(length, 1.0)
    elapsed = time.perf_counter() - t0
    if verbose:
        print(f"bench_dp: L={length} in {elapsed:.2f}s")
    return elapsed


def bench_walk_table(length: int = 2048, verbose: bool = True) -> float:
    """Time the backward walk table used by the exact sampler."""
    params = make_params(2.0)
    t0 = time.perf_counter()
    walk_table(length, params)
    elapsed = time.perf_counter() - t0
    if verbose:
        print(f"bench_walk_table: L={length} in {elapsed:.2f}s")
    return elapsed


def bench_exact_sampler(length: int = 1024, count: int = 200, verbose: bool = True) -> float:
    """Time `count` exact draws at beta = 2 (table built outside the timed loop)."""
    params = make_params(2.0)
    table = walk_table(length, params)
    rng = make_rng(1)
    t0 = time.perf_counter()
    for _ in range(count):
        sample_exact(length, params, rng, table)
    elapsed = time.perf_counter() - t0
    if verbose:
        print(f"bench_exact_sampler: L={length}, {count} draws in {elapsed:.2f}s ({elapsed / count * 1000:.1f} ms/draw)")
    return elapsed


def bench_mcmc(length: int = 256, steps: int = 200_000, verbose: bool = True) -> float:
    """Time chain proposals at the critical region (beta = 1.2)."""
    t0 = time.perf_counter()
    sample_mcmc(length, make_params(1.2), make_rng(1), steps, 0, steps)
    elapsed = time.perf_counter() - t0
    if verbose:
        print(f"bench_mcmc: L={length}, {steps} proposals in {elapsed:.2f}s ({elapsed / steps * 1e6:.2f} us/step)")
    return elapsed


def bench_enumerate(max_length: int = 12, verbose: bool = True) -> float:
    """Time SAW enumeration with midpoint energies up to max_length."""
    t0 = time.perf_counter()
    table = enumerate_family("SAW", max_length)
    elapsed = time.perf_counter() - t0
    if verbose:
        print(f"bench_enumerate: SAW to L={max_length} ({table.count(max_length)} paths) in {elapsed:.2f}s")
    return elapsed


BENCHES = {
    "dp": ("Stretch DP (default L=2048)", bench_dp),
    "table": ("Backward walk table (default L=2048)", bench_walk_table),
    "exact": ("Exact sampler draws (default L=1024)", bench_exact_sampler),
    "mcmc": ("Chain proposals (default L=256)", bench_mcmc),
    "enumerate": ("SAW enumeration (default L=12)", bench_enumerate),
}


def main() -> int:
    import argparse
    p = argparse.ArgumentParser(description="Run ipdsaw benchmarks")
    p.add_argument("bench", nargs="?", default=None, help=f"Bench name ({', '.join(BENCHES)}) or all")
    p.add_argument("-L", "--length", type=int, default=None, help="Length override (max length for enumerate)")
    p.add_argument("-q", "--quiet", action="store_true", help="Less output")
    args = p.parse_args()
    verbose = not args.quiet
    names = list(BENCHES) if args.bench in (None, "all") else [args.bench]
    for name in names:
        if name not in BENCHES:
            print(f"Unknown bench: {name}. Choose from: {', '.join(BENCHES)}")
            return 1
        desc, fn = BENCHES[name]
        if verbose and len(names) > 1:
            print(f"\n--- {name}: {desc} ---")
        if args.length is None:
            fn(verbose=verbose)
        else:
            fn(args.length, verbose=verbose)
    return 0


if __name__ == "__main__":
    sys.exit(main())
