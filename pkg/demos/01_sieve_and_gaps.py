#!/usr/bin/env python3
"""Sieving primes and measuring the gaps between them.

Run: python demos/01_sieve_and_gaps.py
"""

import time

from gaplab import (
    gpy_statistics,
    literature_bounds,
    nth_prime,
    polignac_count,
    prime_count,
    sieve_primes,
)

LIMIT = 10**7

print(f"== sieving to {LIMIT:,} ==")
t0 = time.perf_counter()
count = 0
last = None
for block in sieve_primes(LIMIT):
    count += len(block)
    last = int(block.primes[-1])
print(f"pi({LIMIT:,}) = {count:,}; largest prime = {last:,} "
      f"({time.perf_counter() - t0:.2f}s)")
print(f"the 1000th prime is {nth_prime(1000)} and pi(10^6) = {prime_count(10**6):,}")

print()
print("== gap statistics ==")
stats = gpy_statistics(10**6)
common = sorted(stats.histogram.items(), key=lambda kv: -kv[1])[:8]
print(f"{stats.total_gaps:,} gaps below 10^6; most common gap sizes:")
for k, c in common:
    print(f"  gap {k:3d}: {c:6,} times")
print(f"the only odd gap is g_1 = 1 (between 2 and 3): count {stats.histogram[1]}")

print()
print("== how often does each even gap appear? ==")
for k in (2, 4, 6, 8, 100):
    print(f"  gap {k:3d} below 10^6: {polignac_count(k, 10**6):6,} occurrences")
print("whether every even gap appears infinitely often is exactly the open"
      " question these counts feed; a finite scan only gathers evidence.")

print()
print("== normalized minima (small-gap evidence) ==")
print(f"min of g_n / ln(p_n)                    = {stats.gpy_min:.6f}")
print(f"min of g_n / (sqrt(ln p) (ln ln p)^2)    = {stats.gpy_sqrt_min:.6f}")
print(f"tail minima of g_n from checkpoints on: {stats.min_gap_tail[:6]} ...")
print("these minima keep falling as the limit grows, but at any finite limit"
      " they stay positive: the liminf-zero statement lives at infinity.")

print()
print("== published liminf gap bounds ==")
for name, entry in literature_bounds().items():
    print(f"  {name:16s} {entry.bound:>10,}   {entry.citation}")
