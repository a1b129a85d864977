"""Segmented prime sieve: the data substrate for every other module.

Produces the primes in increasing order with correct 1-based global
indices (p_1 = 2), at interactive speed up to limits of 10^9 and beyond.
Segments are odd-only boolean bitmaps cleared with strided numpy writes.
Output is independent of segment size and thread count by construction:
each segment is a pure function of its range, and blocks are always
delivered to consumers in index order.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import islice
from typing import Iterator

import numpy as np

from .errors import CapacityError

__all__ = [
    "MAX_LIMIT",
    "DEFAULT_SEGMENT_SIZE",
    "PrimeBlock",
    "sieve_primes",
    "iter_primes",
    "primes_upto",
    "prime_count",
    "nth_prime",
    "write_prime_dump",
    "read_prime_dump",
]

# Prime values are stored as int64; the odd-only segment arithmetic needs
# 2*limit to stay inside the width, hence the 2^62 cap.
MAX_LIMIT = 1 << 62

# Number of odd integers covered per segment (a 1 MiB boolean bitmap,
# spanning ~2 million integers). Strided numpy clears amortize per-call
# overhead at this size; the flag exists for experiments either way.
DEFAULT_SEGMENT_SIZE = 1 << 20

MIN_SEGMENT_SIZE = 64


@dataclass(frozen=True)
class PrimeBlock:
    """A contiguous run of primes with global 1-based index offsets.

    ``primes[i]`` is the (start_index + i)-th prime. Arrays are marked
    read-only before emission and safe to share across threads.
    """

    start_index: int
    primes: np.ndarray
    limit_hint: int

    @property
    def end_index(self) -> int:
        return self.start_index + len(self.primes) - 1

    def __len__(self) -> int:
        return len(self.primes)


def _small_sieve(limit: int) -> np.ndarray:
    """Dense sieve for base primes up to sqrt(limit); int64 values."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_segment(low: int, high: int, odd_base: np.ndarray) -> np.ndarray:
    """Primes in [low, high) for odd low; odd_base = odd primes <= sqrt(high)."""
    n_odds = (high - low + 1) // 2
    mask = np.ones(n_odds, dtype=bool)
    for p in odd_base.tolist():
        p2 = p * p
        if p2 >= high:
            break
        start = max(p2, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        mask[(start - low) // 2 :: p] = False
    return low + 2 * np.flatnonzero(mask).astype(np.int64)


def _validate_limit(limit: int) -> int:
    if not isinstance(limit, (int, np.integer)):
        raise ValueError(f"limit must be an integer, got {limit!r}")
    limit = int(limit)
    if limit > MAX_LIMIT:
        raise CapacityError(
            f"limit {limit} exceeds the supported maximum {MAX_LIMIT} (int64 segment arithmetic)"
        )
    return limit


def sieve_primes(
    limit: int,
    segment_size: int | None = None,
    threads: int = 1,
) -> Iterator[PrimeBlock]:
    """Stream every prime <= limit exactly once, in blocks, in index order.

    Args:
      limit: inclusive upper bound, >= 2.
      segment_size: odd numbers per segment (>= 64); default
        DEFAULT_SEGMENT_SIZE. The prime stream does not depend on it.
      threads: sieve segments concurrently when > 1. Blocks are still
        delivered in index order, so output is identical for any value.

    Raises:
      ValueError: limit < 2 or segment_size < 64.
      CapacityError: limit exceeds MAX_LIMIT.
    """
    limit = _validate_limit(limit)
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    if segment_size is None:
        segment_size = DEFAULT_SEGMENT_SIZE
    if segment_size < MIN_SEGMENT_SIZE:
        raise ValueError(f"segment_size must be >= {MIN_SEGMENT_SIZE}, got {segment_size}")
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")

    base = _small_sieve(math.isqrt(limit))
    odd_base = base[1:] if len(base) else base

    span = 2 * segment_size
    bounds = [(low, min(low + span, limit + 1)) for low in range(3, limit + 1, span)]

    def jobs() -> Iterator[np.ndarray]:
        if threads == 1:
            for low, high in bounds:
                yield _sieve_segment(low, high, odd_base)
        else:
            # Bounded look-ahead keeps memory flat while segments are
            # sieved concurrently; results are consumed strictly in order.
            with ThreadPoolExecutor(max_workers=threads) as pool:
                pending: deque = deque()
                it = iter(bounds)
                for low, high in islice(it, threads + 2):
                    pending.append(pool.submit(_sieve_segment, low, high, odd_base))
                while pending:
                    done = pending.popleft()
                    nxt = next(it, None)
                    if nxt is not None:
                        pending.append(pool.submit(_sieve_segment, *nxt, odd_base))
                    yield done.result()

    count = 0
    first = True
    for seg_primes in jobs():
        if first:
            seg_primes = np.concatenate([np.array([2], dtype=np.int64), seg_primes])
            first = False
        if not len(seg_primes):
            continue
        seg_primes.flags.writeable = False
        yield PrimeBlock(start_index=count + 1, primes=seg_primes, limit_hint=limit)
        count += len(seg_primes)
    if first:
        # limit in {2}: no odd segment was generated at all
        two = np.array([2], dtype=np.int64)
        two.flags.writeable = False
        yield PrimeBlock(start_index=1, primes=two, limit_hint=limit)


def iter_primes(limit: int, segment_size: int | None = None, threads: int = 1) -> Iterator[int]:
    """Primes <= limit one by one, as Python ints."""
    for block in sieve_primes(limit, segment_size, threads):
        yield from block.primes.tolist()


def primes_upto(limit: int, segment_size: int | None = None, threads: int = 1) -> np.ndarray:
    """All primes <= limit as one int64 array."""
    blocks = [b.primes for b in sieve_primes(limit, segment_size, threads)]
    return np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64)


def prime_count(limit: int, segment_size: int | None = None, threads: int = 1) -> int:
    """pi(limit): the number of primes <= limit. Zero for limit < 2."""
    limit = _validate_limit(limit)
    if limit < 0:
        raise ValueError(f"limit must be >= 0, got {limit}")
    if limit < 2:
        return 0
    return sum(len(b) for b in sieve_primes(limit, segment_size, threads))


def _nth_prime_bound(n: int) -> int:
    """Upper bound for p_n: n (ln n + ln ln n) for n >= 6 (Rosser)."""
    if n < 6:
        return 12
    x = float(n)
    return int(x * (math.log(x) + math.log(math.log(x)))) + 1


def nth_prime(n: int, segment_size: int | None = None, threads: int = 1) -> int:
    """The n-th prime, 1-based: nth_prime(1) = 2.

    Raises:
      ValueError: n < 1.
      CapacityError: p_n would exceed MAX_LIMIT.
    """
    if n < 1:
        raise ValueError(f"prime index must be >= 1, got {n}")
    bound = _nth_prime_bound(n)
    if bound > MAX_LIMIT:
        raise CapacityError(f"p_{n} exceeds the supported maximum value {MAX_LIMIT}")
    while True:
        seen = 0
        for block in sieve_primes(bound, segment_size, threads):
            if seen + len(block) >= n:
                return int(block.primes[n - 1 - seen])
            seen += len(block)
        # Rosser's bound holds for n >= 6, so this is unreachable; grow
        # defensively rather than trust the estimate blindly.
        bound = bound * 2


def write_prime_dump(path: str, limit: int, segment_size: int | None = None, threads: int = 1) -> int:
    """Dump all primes <= limit as little-endian 64-bit integers.

    Returns the number of primes written. The format is a raw
    concatenation of '<i8' values, suitable for numpy.fromfile.
    """
    count = 0
    with open(path, "wb") as fh:
        for block in sieve_primes(limit, segment_size, threads):
            block.primes.astype("<i8").tofile(fh)
            count += len(block)
    return count


def read_prime_dump(path: str) -> np.ndarray:
    """Read a prime dump written by write_prime_dump."""
    return np.fromfile(path, dtype="<i8")
