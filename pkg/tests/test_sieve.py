import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gaplab.errors import CapacityError
from gaplab.sieve import (
    MAX_LIMIT,
    PrimeBlock,
    iter_primes,
    nth_prime,
    prime_count,
    primes_upto,
    read_prime_dump,
    sieve_primes,
    write_prime_dump,
)

from oracles import dense_sieve, is_prime_trial_division, trial_division_primes


def test_first_primes_with_indices():
    blocks = list(sieve_primes(10))
    assert blocks[0].start_index == 1
    assert np.concatenate([b.primes for b in blocks]).tolist() == [2, 3, 5, 7]
    assert blocks[-1].end_index == 4


def test_against_trial_division_to_1e5():
    assert primes_upto(100_000).tolist() == trial_division_primes(100_000)


def test_against_dense_sieve_at_many_limits():
    oracle = dense_sieve(100_000)
    for limit in (2, 3, 4, 5, 10, 97, 100, 1000, 4096, 65_537, 99_991):
        expected = [p for p in oracle if p <= limit]
        assert primes_upto(limit).tolist() == expected


def test_prime_counts():
    assert prime_count(1) == 0
    assert prime_count(0) == 0
    assert prime_count(2) == 1
    assert prime_count(100) == 25
    assert prime_count(10**6) == 78498  # trial-division/dense oracle, frozen


def test_prime_count_rejects_negative():
    with pytest.raises(ValueError):
        prime_count(-1)


def test_nth_prime_values():
    assert nth_prime(1) == 2
    assert nth_prime(10) == 29
    assert nth_prime(1000) == 7919
    p = nth_prime(78498)
    assert p == 999983
    assert is_prime_trial_division(p)


def test_nth_prime_prime_count_adjoint():
    for x in (2, 3, 10, 97, 1000, 12345):
        assert nth_prime(prime_count(x)) <= x


def test_index_consistency():
    # for each emitted prime p at index i, prime_count(p) == i
    blocks = list(sieve_primes(10_000, segment_size=512))
    for block in blocks[:2]:
        for offset in (0, len(block) // 2, len(block) - 1):
            i = block.start_index + offset
            p = int(block.primes[offset])
            assert prime_count(p) == i


def test_block_invariants():
    prev_end = 0
    prev_last = 0
    for block in sieve_primes(50_000, segment_size=1024):
        assert isinstance(block, PrimeBlock)
        assert block.start_index == prev_end + 1
        arr = block.primes
        assert (np.diff(arr) > 0).all()
        assert arr[0] > prev_last
        assert not arr.flags.writeable
        assert block.limit_hint == 50_000
        prev_end = block.end_index
        prev_last = int(arr[-1])


def test_deterministic_across_segment_sizes_and_threads():
    reference = primes_upto(200_000)
    for segment_size in (64, 101, 4096, 1 << 18):
        assert np.array_equal(primes_upto(200_000, segment_size=segment_size), reference)
    for threads in (2, 8):
        assert np.array_equal(primes_upto(200_000, threads=threads), reference)
        assert np.array_equal(
            primes_upto(200_000, segment_size=999, threads=threads), reference
        )


def test_block_index_structure_independent_of_threads():
    seq = [(b.start_index, len(b)) for b in sieve_primes(100_000, segment_size=2048)]
    par = [(b.start_index, len(b)) for b in sieve_primes(100_000, segment_size=2048, threads=4)]
    assert seq == par


def test_domain_and_capacity_errors():
    with pytest.raises(ValueError):
        list(sieve_primes(1))
    with pytest.raises(ValueError):
        list(sieve_primes(100, segment_size=32))
    with pytest.raises(CapacityError) as exc:
        list(sieve_primes(MAX_LIMIT + 1))
    assert str(MAX_LIMIT) in str(exc.value)
    with pytest.raises(ValueError):
        nth_prime(0)


def test_iter_primes_matches_array():
    assert list(iter_primes(1000)) == primes_upto(1000).tolist()


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=3000))
def test_small_limits_match_oracle(limit):
    assert primes_upto(limit).tolist() == trial_division_primes(limit)


def test_prime_dump_roundtrip(tmp_path):
    path = tmp_path / "primes.bin"
    count = write_prime_dump(str(path), 1000)
    assert count == 168
    back = read_prime_dump(str(path))
    assert back.tolist() == primes_upto(1000).tolist()
    # little-endian contract: first value is 2
    assert path.read_bytes()[:8] == (2).to_bytes(8, "little")
