import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import dense_sieve


@pytest.fixture(scope="session")
def oracle_primes_1m() -> list[int]:
    """Dense-sieve prime list to 10^6, shared by oracle-backed tests."""
    return dense_sieve(10**6)
