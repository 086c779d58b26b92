"""Sobol sequence: direction-number expansion, direct form, and the Gray-code stream.

Direction numbers are kept as exact integers scaled by 2^w (w = 32 by default);
coordinates are emitted as integer / 2^w, so the generator never accumulates
floating-point error. The least significant bit of the index selects the first
direction number (Bratley-Fox convention).
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import IndexOverflowError, ParseError, SequenceExhaustedError, UnsupportedDimensionError
from .gf2 import is_listed_primitive, poly_for_dimension

W_BITS = 32


@dataclass(frozen=True)
class SobolDimensionParams:
    """Primitive polynomial plus initial direction integers for one dimension.

    degree: q of the polynomial x^q + a_1 x^(q-1) + ... + a_(q-1) x + 1.
    poly_coeffs: interior bits a_1..a_(q-1), a_1 most significant.
    initial_dirs: q odd integers, the i-th strictly below 2^i.
    """

    degree: int
    poly_coeffs: int
    initial_dirs: tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        q = self.degree
        if q < 1:
            raise ValueError(f"degree must be >= 1, got {q}")
        if not 0 <= self.poly_coeffs < (1 << max(q - 1, 0)):
            raise ValueError(f"polynomial bits {self.poly_coeffs} out of range for degree {q}")
        if not is_listed_primitive(q, self.poly_coeffs):
            raise ValueError(
                f"polynomial (degree {q}, bits {self.poly_coeffs}) is not in the primitive table"
            )
        if len(self.initial_dirs) != q:
            raise ValueError(f"expected {q} initial integers, got {len(self.initial_dirs)}")
        for i, m in enumerate(self.initial_dirs, start=1):
            if m % 2 == 0 or not 0 < m < (1 << i):
                raise ValueError(f"initial integer m{i}={m} must be odd and in (0, 2^{i})")


def params_for_dimension(dim: int, initial_dirs: tuple[int, ...]) -> SobolDimensionParams:
    """Params using the polynomial the embedded table assigns to `dim`."""
    degree, coeffs = poly_for_dimension(dim)
    return SobolDimensionParams(degree, coeffs, tuple(initial_dirs))


def expand_direction_numbers(params: SobolDimensionParams, w_bits: int = W_BITS) -> list[int]:
    """Expand the initial integers to w direction integers via the bit recurrence.

    Entry i (1-based) is m_i * 2^(w-i); past the polynomial degree the entries
    follow v_i = a_1 v_(i-1) xor ... xor a_(q-1) v_(i-q+1) xor v_(i-q) xor (v_(i-q) >> q),
    all in exact integer arithmetic.
    """
    q = params.degree
    if w_bits < q:
        raise ValueError(f"w_bits={w_bits} must be >= polynomial degree {q}")
    v = [m << (w_bits - i) for i, m in enumerate(params.initial_dirs, start=1)]
    for i in range(q, w_bits):
        acc = v[i - q] ^ (v[i - q] >> q)
        for k in range(1, q):
            if (params.poly_coeffs >> (q - 1 - k)) & 1:
                acc ^= v[i - k]
        v.append(acc)
    return v


class DirectionTable:
    """Expanded direction integers for dimensions 1..d, each scaled by 2^w."""

    def __init__(self, params: list[SobolDimensionParams], w_bits: int = W_BITS):
        if not params:
            raise ValueError("direction table needs at least one dimension")
        self.w_bits = w_bits
        self.params = list(params)
        # The degree-1 dimension is the van der Corput base-2 sequence: every
        # direction integer is 2^(w-i) (all m_i = 1), the standard special case
        # of published Sobol implementations. The recurrence applies elsewhere.
        vdc = [1 << (w_bits - i) for i in range(1, w_bits + 1)]
        self.directions = np.array(
            [vdc if p.degree == 1 else expand_direction_numbers(p, w_bits) for p in self.params],
            dtype=np.int64,
        )
        # bit w-i of entry i must be set, i.e. the entry right-shifted by w-i is odd
        for i in range(1, w_bits + 1):
            shifted = self.directions[:, i - 1] >> (w_bits - i)
            if not (shifted % 2 == 1).all():
                raise ValueError(f"direction entry {i} lost its leading bit")

    @property
    def dimensions(self) -> int:
        return len(self.params)

    def to_text(self) -> str:
        lines = ["# dim degree polyBits m1..mq"]
        for dim, p in enumerate(self.params, start=1):
            ms = " ".join(str(m) for m in p.initial_dirs)
            lines.append(f"{dim} {p.degree} {p.poly_coeffs} {ms}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, w_bits: int = W_BITS) -> "DirectionTable":
        params: list[SobolDimensionParams] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) < 4:
                raise ParseError("expected `dim degree polyBits m1..mq`", lineno)
            try:
                numbers = [int(f) for f in fields]
            except ValueError:
                raise ParseError(f"non-integer field in {line!r}", lineno) from None
            dim, degree, coeffs = numbers[0], numbers[1], numbers[2]
            if dim != len(params) + 1:
                raise ParseError(f"expected dimension {len(params) + 1}, got {dim}", lineno)
            if len(numbers) - 3 != degree:
                raise ParseError(f"degree {degree} needs {degree} initial integers", lineno)
            try:
                params.append(SobolDimensionParams(degree, coeffs, tuple(numbers[3:])))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        if not params:
            raise ParseError("no dimensions in direction-number file")
        return cls(params, w_bits)


def _check_dims(table: DirectionTable, dim: int) -> None:
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if dim > table.dimensions:
        raise UnsupportedDimensionError(
            f"dimension {dim} exceeds the direction table ({table.dimensions} dimensions)"
        )


def sobol_index_ints(ns: np.ndarray, table: DirectionTable, dim: int) -> np.ndarray:
    """Integer-valued Sobol points (scaled by 2^w) for an array of direct indices."""
    ns = np.asarray(ns, dtype=np.int64)
    x = np.zeros((len(ns), dim), dtype=np.int64)
    dirs = table.directions[:dim]
    n_bits = int(ns.max()).bit_length() if len(ns) else 0
    for bit in range(min(n_bits, table.w_bits)):
        selected = ((ns >> bit) & 1).astype(bool)
        if selected.any():
            x[selected] ^= dirs[:, bit]
    return x


def sobol_direct_point(n: int, table: DirectionTable, dim: int) -> np.ndarray:
    """Point n (n >= 1) by the direct XOR formula: bit i of n selects direction integer i+1."""
    _check_dims(table, dim)
    if n < 1:
        raise ValueError(f"index must be >= 1, got {n}")
    if n >= 1 << table.w_bits:
        raise IndexOverflowError(f"index {n} out of range for w={table.w_bits}")
    ints = sobol_index_ints(np.array([n]), table, dim)[0]
    return ints / float(1 << table.w_bits)


def gray_code(n: int) -> int:
    return n ^ (n >> 1)


def lowest_zero_bit(n: int) -> int:
    """1-based position of the lowest zero bit of n."""
    pos = 1
    while n & 1:
        n >>= 1
        pos += 1
    return pos


class SobolGrayStream:
    """Antonov-Saleev stream: one XOR per point against the running integer state.

    The n-th emitted point (n starting at 1) equals the direct-formula point at
    index gray_code(n); the origin at n = 0 is never emitted.
    Not thread-safe; one driver per instance.
    """

    def __init__(self, table: DirectionTable, dim: int):
        _check_dims(table, dim)
        self.table = table
        self.dimension = dim
        self._state = np.zeros(dim, dtype=np.int64)
        self._emitted = 0  # index n of the last emitted point

    @property
    def capacity(self) -> int:
        return (1 << self.table.w_bits) - 1

    def next_point(self) -> np.ndarray:
        if self._emitted >= self.capacity:
            raise SequenceExhaustedError(f"stream exhausted after {self.capacity} points")
        bit = lowest_zero_bit(self._emitted)
        self._state ^= self.table.directions[: self.dimension, bit - 1]
        self._emitted += 1
        return self._state / float(1 << self.table.w_bits)

    def take(self, count: int) -> np.ndarray:
        """Next `count` points as a (count, dim) array, identical to repeated next_point().

        Uses the identity stream point n == direct point at gray_code(n), so the
        block is computed without stepping the recurrence point by point.
        """
        if count < 0:
            raise ValueError("count must be >= 0")
        if self._emitted + count > self.capacity:
            raise SequenceExhaustedError(
                f"requested {count} more points past capacity {self.capacity}"
            )
        ns = np.arange(self._emitted + 1, self._emitted + count + 1, dtype=np.int64)
        grays = ns ^ (ns >> 1)
        ints = sobol_index_ints(grays, self.table, self.dimension)
        self._emitted += count
        if count:
            self._state = ints[-1].copy()
        return ints / float(1 << self.table.w_bits)
