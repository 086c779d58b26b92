"""Halton sequence: per-dimension radical inverses in the first d prime bases."""

import numpy as np

from .primes import first_primes
from .radical import radical_inverse, radical_inverse_block


def halton_point(n: int, dim: int) -> np.ndarray:
    """Point n (n >= 1) of the dim-dimensional Halton sequence."""
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    bases = first_primes(dim)
    return np.array([radical_inverse(n, b) for b in bases])


class HaltonStream:
    """Stateful Halton stream starting at index 1. Not thread-safe; one driver per instance."""

    def __init__(self, dim: int, start: int = 1):
        if start < 1:
            raise ValueError(f"start index must be >= 1, got {start}")
        self.dimension = dim
        self._bases = first_primes(dim)
        self._next = start

    def next_point(self) -> np.ndarray:
        point = halton_point(self._next, self.dimension)
        self._next += 1
        return point

    def take(self, count: int) -> np.ndarray:
        """Next `count` points as a (count, dim) array, identical to repeated next_point()."""
        if count < 0:
            raise ValueError("count must be >= 0")
        ns = np.arange(self._next, self._next + count, dtype=np.int64)
        self._next += count
        return np.column_stack([radical_inverse_block(ns, b) for b in self._bases])
