"""Divergence trackers: the reciprocal-prime sum and the n ln n ratio.

Both trackers walk the prime stream once and report at a schedule of
checkpoint indices. Checkpoints default to powers of two plus the final
index: log-spaced evidence is the only kind that says anything about
series this slow (the reciprocal-prime sum grows like ln ln x).

partial_sum is carried in a double-double accumulator (~32 significant
digits); loglog_gap = partial_sum - ln ln p_n is reported as a plumbing
observation with no convergence claim attached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accum import DoubleDouble, exact_block_sum
from .sieve import _nth_prime_bound, sieve_primes

__all__ = ["SeriesCheckpoint", "reciprocal_prime_sum", "pnt_ratio_track"]


@dataclass(frozen=True)
class SeriesCheckpoint:
    """State of both trackers after the first n primes.

    pnt_ratio is None at n = 1 (n ln n vanishes there); loglog_gap is
    None while p_n < 3 (ln ln 2 < 0 says nothing useful about the sum).
    """

    n: int
    p_n: int
    partial_sum: float
    pnt_ratio: float | None
    loglog_gap: float | None


def _checkpoint_record(n: int, p_n: int, acc: DoubleDouble) -> SeriesCheckpoint:
    partial = acc.value()
    ratio = p_n / (n * math.log(n)) if n >= 2 else None
    gap = partial - math.log(math.log(p_n)) if p_n >= 3 else None
    return SeriesCheckpoint(n=n, p_n=p_n, partial_sum=partial, pnt_ratio=ratio, loglog_gap=gap)


def _track(
    limit: int,
    checkpoints: list[int] | None,
    segment_size: int | None,
    threads: int,
) -> list[SeriesCheckpoint]:
    if limit < 2:
        raise ValueError(f"limit must be >= 2, got {limit}")
    explicit = checkpoints is not None
    if explicit:
        checkpoints = [int(c) for c in checkpoints]
        if not checkpoints:
            raise ValueError("checkpoint list must not be empty")
        if any(c < 1 for c in checkpoints):
            raise ValueError(f"checkpoints must be >= 1, got {checkpoints}")
        if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
            raise ValueError(f"checkpoints must be strictly increasing, got {checkpoints}")

    acc = DoubleDouble()
    out: list[SeriesCheckpoint] = []
    count = 0
    last_prime = 0

    pending = list(checkpoints) if explicit else None
    next_dyadic = 2

    for block in sieve_primes(limit, segment_size, threads):
        primes = block.primes
        # cut positions inside this block, in index order
        cuts: list[int] = []
        hi_index = count + len(primes)
        if explicit:
            while pending and pending[0] <= hi_index:
                cuts.append(pending.pop(0))
        else:
            while next_dyadic <= hi_index:
                cuts.append(next_dyadic)
                next_dyadic *= 2
        offsets = [c - count for c in cuts]
        pieces = np.split(primes, offsets) if offsets else [primes]
        for i, piece in enumerate(pieces):
            if len(piece):
                acc.add(*exact_block_sum(1.0 / piece.astype(np.float64)))
                count += len(piece)
                last_prime = int(piece[-1])
            if i < len(cuts):
                out.append(_checkpoint_record(cuts[i], last_prime, acc))

    if explicit:
        if pending:
            raise ValueError(
                f"checkpoint {pending[0]} exceeds the prime count {count} for limit {limit}"
            )
    elif not out or out[-1].n != count:
        out.append(_checkpoint_record(count, last_prime, acc))
    return out


def reciprocal_prime_sum(
    limit: int,
    checkpoints: list[int] | None = None,
    segment_size: int | None = None,
    threads: int = 1,
) -> list[SeriesCheckpoint]:
    """Partial sums of 1/p_1 + 1/p_2 + ... at the checkpoint indices.

    Sums are accumulated in ascending prime order with a double-double
    accumulator, so the reported values do not depend on segmentation or
    thread count. Checkpoints default to powers of two plus the final
    index; an explicit empty list is rejected.
    """
    return _track(limit, checkpoints, segment_size, threads)


def pnt_ratio_track(
    limit: int | None = None,
    checkpoints: list[int] | None = None,
    segment_size: int | None = None,
    threads: int = 1,
) -> list[SeriesCheckpoint]:
    """p_n / (n ln n) at each checkpoint index (defined for n >= 2).

    When limit is omitted, it is derived from the largest checkpoint via
    the Rosser bound p_n < n (ln n + ln ln n).
    """
    if checkpoints is not None and any(c == 1 for c in checkpoints):
        raise ValueError("pnt ratio is undefined at n = 1: n ln n = 0 there")
    if limit is None:
        if not checkpoints:
            raise ValueError("either a limit or explicit checkpoints are required")
        limit = _nth_prime_bound(max(checkpoints))
    return _track(limit, checkpoints, segment_size, threads)
