"""Prime tables for Halton bases and the Faure base prime."""

import numpy as np

from ..errors import UnsupportedDimensionError

MAX_HALTON_DIMENSION = 1000


def _sieve(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask)

# 7919 is the 1000th prime; sieve once at import.
_PRIMES = _sieve(7920)
assert len(_PRIMES) >= MAX_HALTON_DIMENSION


def first_primes(count: int) -> tuple[int, ...]:
    """The first `count` primes (Halton bases for dimensions 1..count)."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if count > MAX_HALTON_DIMENSION:
        raise UnsupportedDimensionError(
            f"dimension {count} exceeds the embedded prime table ({MAX_HALTON_DIMENSION} entries)"
        )
    return tuple(int(p) for p in _PRIMES[:count])


def first_prime_geq(n: int) -> int:
    """Smallest prime >= max(n, 2)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    n = max(n, 2)
    if n <= _PRIMES[-1]:
        return int(_PRIMES[np.searchsorted(_PRIMES, n)])
    candidate = n
    while True:
        if all(candidate % int(p) for p in _PRIMES[_PRIMES * _PRIMES <= candidate]):
            return candidate
        candidate += 1
