"""Faure sequence in base p, the smallest prime >= the dimension.

Coordinate 1 of point n is the base-p radical inverse of n; each later
coordinate applies the Pascal-matrix digit transform (binomials mod p) to the
previous coordinate's digits.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import IndexOverflowError, SequenceExhaustedError
from .primes import first_prime_geq

DEFAULT_N_MAX = 1 << 20


@dataclass(frozen=True)
class FaureParams:
    """Base prime, digit count, and Pascal matrix mod p for a given dimension."""

    dimension: int
    prime: int
    digits: int
    pascal_mod_p: np.ndarray  # (digits, digits), entry [l, j] = C(l, j) mod p

    @classmethod
    def for_dimension(cls, dim: int, n_max: int = DEFAULT_N_MAX) -> "FaureParams":
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        if n_max < 2:
            raise ValueError(f"n_max must be >= 2, got {n_max}")
        p = first_prime_geq(dim)
        m = 1
        while p**m < n_max:
            m += 1
        pascal = np.zeros((m, m), dtype=np.int64)
        for l in range(m):
            pascal[l, 0] = 1
            for j in range(1, l + 1):
                pascal[l, j] = (pascal[l - 1, j - 1] + pascal[l - 1, j]) % p
        return cls(dim, p, m, pascal)

    @property
    def capacity(self) -> int:
        """Number of representable indices: valid n are 0 .. capacity - 1."""
        return self.prime**self.digits


def _digits_of(ns: np.ndarray, base: int, width: int) -> np.ndarray:
    """(len(ns), width) matrix of base-`base` digits, least significant first."""
    digits = np.empty((len(ns), width), dtype=np.int64)
    rest = np.asarray(ns, dtype=np.int64).copy()
    for j in range(width):
        rest, digits[:, j] = np.divmod(rest, base)
    return digits


def faure_points_block(ns: np.ndarray, params: FaureParams, dim: int | None = None) -> np.ndarray:
    """Faure points for an array of indices, shape (len(ns), dim)."""
    d = params.dimension if dim is None else dim
    if not 1 <= d <= params.dimension:
        raise ValueError(f"dimension {d} outside 1..{params.dimension}")
    ns = np.asarray(ns, dtype=np.int64)
    if len(ns) and (ns.min() < 0 or ns.max() >= params.capacity):
        raise IndexOverflowError(
            f"index out of range: valid indices are 0..{params.capacity - 1}"
        )
    p, m = params.prime, params.digits
    digits = _digits_of(ns, p, m)
    scale = float(p**m)
    # digit j has place value p^(-j-1): numerator weights p^(m-1-j), one exact division
    weights = p ** np.arange(m - 1, -1, -1, dtype=np.int64)
    out = np.empty((len(ns), d))
    out[:, 0] = (digits @ weights) / scale
    for i in range(1, d):
        digits = (digits @ params.pascal_mod_p) % p
        out[:, i] = (digits @ weights) / scale
    return out


def faure_point(n: int, params: FaureParams, dim: int | None = None) -> np.ndarray:
    """Point n (n >= 0) of the Faure sequence."""
    if n < 0:
        raise ValueError(f"index must be >= 0, got {n}")
    return faure_points_block(np.array([n]), params, dim)[0]


class FaureStream:
    """Stateful Faure stream starting at index 1 (the all-zero point at n = 0 is skipped).

    Not thread-safe; one driver per instance.
    """

    def __init__(self, dim: int, n_max: int = DEFAULT_N_MAX, start: int = 1):
        if start < 1:
            raise ValueError(f"start index must be >= 1, got {start}")
        self.params = FaureParams.for_dimension(dim, n_max)
        self.dimension = dim
        self._next = start

    def next_point(self) -> np.ndarray:
        if self._next >= self.params.capacity:
            raise SequenceExhaustedError(f"stream exhausted after {self.params.capacity - 1} points")
        point = faure_point(self._next, self.params)
        self._next += 1
        return point

    def take(self, count: int) -> np.ndarray:
        if count < 0:
            raise ValueError("count must be >= 0")
        if self._next + count > self.params.capacity:
            raise SequenceExhaustedError(
                f"requested {count} more points past capacity {self.params.capacity - 1}"
            )
        ns = np.arange(self._next, self._next + count, dtype=np.int64)
        self._next += count
        return faure_points_block(ns, self.params)
