"""Radical inverse: mirror the base-b digits of an integer about the radix point."""

import numpy as np


def radical_inverse(n: int, base: int) -> float:
    """Digit-reversed fraction of n in the given base.

    Computed exactly as (reversed-digit integer) / base^digits with a single
    float division at the end, so no rounding accumulates across digits.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    num = 0
    den = 1
    while n > 0:
        n, digit = divmod(n, base)
        num = num * base + digit
        den *= base
    return num / den


def radical_inverse_block(ns: np.ndarray, base: int) -> np.ndarray:
    """Vectorized radical_inverse over an int64 index array.

    Bit-identical to the scalar version: both form the same reversed-digit
    integer and divide once. Indices that run out of digits early keep
    num/den invariant because appending a zero digit scales both.
    """
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    n = np.asarray(ns, dtype=np.int64).copy()
    if n.size and n.min() < 0:
        raise ValueError("indices must be >= 0")
    num = np.zeros_like(n)
    den = 1
    while n.any():
        n, digit = np.divmod(n, base)
        num = num * base + digit
        den *= base
    return num / den
