"""Sobol direction numbers, direct form, Gray-code stream, and the file format."""

import numpy as np
import pytest

from qmcbn.errors import IndexOverflowError, ParseError, SequenceExhaustedError
from qmcbn.lds import (
    PRIMITIVE_POLYS,
    DirectionTable,
    SobolDimensionParams,
    SobolGrayStream,
    expand_direction_numbers,
    gray_code,
    params_for_dimension,
    poly_for_dimension,
    radical_inverse,
    sobol_direct_point,
)


def oracle_expand(degree, coeffs, ms, w):
    """Brute-force recurrence on bit lists instead of machine integers."""
    def to_bits(v):  # w fractional bits
        return [(v >> (w - 1 - i)) & 1 for i in range(w)]

    def from_bits(bits):
        return sum(b << (w - 1 - i) for i, b in enumerate(bits))

    vs = [ms[i] << (w - i - 1) for i in range(degree)]
    for i in range(degree, w):
        acc = to_bits(vs[i - degree])
        shifted = to_bits(vs[i - degree] >> degree)
        acc = [a ^ b for a, b in zip(acc, shifted)]
        for k in range(1, degree):
            if (coeffs >> (degree - 1 - k)) & 1:
                acc = [a ^ b for a, b in zip(acc, to_bits(vs[i - k]))]
        vs.append(from_bits(acc))
    return vs


def test_expansion_examples():
    assert expand_direction_numbers(SobolDimensionParams(1, 0, (1,)), 4) == [8, 12, 10, 15]
    assert expand_direction_numbers(SobolDimensionParams(2, 1, (1, 1)), 3) == [4, 2, 7]


def test_expansion_against_oracle():
    rng = np.random.default_rng(2)
    for _ in range(50):
        dim = int(rng.integers(2, 40))
        degree, coeffs = poly_for_dimension(dim)
        ms = tuple(2 * int(rng.integers(0, 1 << (i - 1))) + 1 for i in range(1, degree + 1))
        params = SobolDimensionParams(degree, coeffs, ms)
        w = int(rng.integers(degree, 20))
        assert expand_direction_numbers(params, w) == oracle_expand(degree, coeffs, ms, w)


def test_param_validation():
    with pytest.raises(ValueError):
        SobolDimensionParams(1, 0, (2,))  # even
    with pytest.raises(ValueError):
        SobolDimensionParams(2, 1, (1, 5))  # m2 >= 2^2
    with pytest.raises(ValueError):
        SobolDimensionParams(2, 0, (1, 1))  # x^2 + 1 is not primitive
    with pytest.raises(ValueError):
        expand_direction_numbers(SobolDimensionParams(3, 1, (1, 1, 1)), 2)  # w < degree


def gf2_order_oracle(degree: int, interior: int) -> bool:
    """Independent primitivity check: x has order 2^degree - 1 modulo the polynomial."""
    poly = (1 << degree) | (interior << 1) | 1
    if degree == 1:
        return poly == 0b11

    def mulmod(a, b):
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if (a >> degree) & 1:
                a ^= poly
        return r

    def powmod(base, e):
        r = 1
        while e:
            if e & 1:
                r = mulmod(r, base)
            base = mulmod(base, base)
            e >>= 1
        return r

    order = (1 << degree) - 1
    if powmod(0b10, order) != 1:
        return False
    factors, n = [], order
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        factors.append(n)
    return all(powmod(0b10, order // f) != 1 for f in factors)


def test_polynomial_table_is_primitive_and_sorted():
    assert len(PRIMITIVE_POLYS) >= 180
    assert list(PRIMITIVE_POLYS) == sorted(PRIMITIVE_POLYS)
    for degree, interior in PRIMITIVE_POLYS[:80]:
        assert gf2_order_oracle(degree, interior), (degree, interior)


def small_table(dims: int, w_bits: int = 32) -> DirectionTable:
    params = []
    for j in range(1, dims + 1):
        degree, _ = poly_for_dimension(j)
        params.append(params_for_dimension(j, tuple(1 for _ in range(degree))))
    return DirectionTable(params, w_bits)


def test_direct_point_examples():
    table = small_table(1)
    assert sobol_direct_point(1, table, 1)[0] == 0.5
    assert sobol_direct_point(3, table, 1)[0] == 0.75
    with pytest.raises(ValueError):
        sobol_direct_point(0, table, 1)
    with pytest.raises(IndexOverflowError):
        sobol_direct_point(1 << 32, table, 1)


def test_dimension_one_is_van_der_corput():
    table = small_table(3)
    for n in range(1, 1000):
        assert sobol_direct_point(n, table, 1)[0] == radical_inverse(n, 2)


def test_gray_stream_examples():
    table = small_table(1)
    stream = SobolGrayStream(table, 1)
    first = [stream.next_point()[0] for _ in range(3)]
    assert first == [0.5, 0.75, 0.25]


def test_gray_equals_direct_at_gray_index():
    table = small_table(6)
    stream = SobolGrayStream(table, 6)
    for n in range(1, 512):
        expected = sobol_direct_point(gray_code(n), table, 6)
        assert np.array_equal(stream.next_point(), expected)


def test_gray_vs_direct_point_sets():
    table = small_table(4)
    for k in (2, 5, 9):
        stream = SobolGrayStream(table, 4)
        emitted = {tuple(p) for p in stream.take(2**k - 1)}
        direct = {tuple(sobol_direct_point(n, table, 4)) for n in range(1, 2**k)}
        assert emitted == direct


def test_exhaustion():
    table = small_table(1, w_bits=4)
    stream = SobolGrayStream(table, 1)
    stream.take(15)
    with pytest.raises(SequenceExhaustedError):
        stream.next_point()
    stream2 = SobolGrayStream(table, 1)
    with pytest.raises(SequenceExhaustedError):
        stream2.take(16)


def test_take_matches_next_point_and_is_deterministic():
    table = small_table(8)
    s1, s2 = SobolGrayStream(table, 8), SobolGrayStream(table, 8)
    block = s1.take(257)
    singles = np.array([s2.next_point() for _ in range(257)])
    assert np.array_equal(block, singles)
    assert (block >= 0).all() and (block < 1).all()
    # continuation: take after take is one stream
    s3 = SobolGrayStream(table, 8)
    a = np.vstack([s3.take(100), s3.take(157)])
    assert np.array_equal(a, block)


def test_direction_file_round_trip():
    table = small_table(5)
    text = table.to_text()
    parsed = DirectionTable.from_text(text)
    assert parsed.to_text() == text
    assert np.array_equal(parsed.directions, table.directions)


@pytest.mark.parametrize(
    "bad, message",
    [
        ("1 1 0", "m1..mq"),
        ("2 2 1 1 1", "expected dimension 1"),
        ("1 1 0 2", "odd"),
        ("1 2 0 1 1", "primitive"),
        ("1 1 zero 1", "non-integer"),
    ],
)
def test_direction_file_errors(bad, message):
    with pytest.raises(ParseError, match=message):
        DirectionTable.from_text(bad)


def test_unit_range_over_1e5_indices():
    block = SobolGrayStream(small_table(8), 8).take(100_000)
    assert (block >= 0).all() and (block < 1).all()


def test_leading_bit_invariant():
    table = small_table(16)
    w = table.w_bits
    for row in table.directions:
        for i, v in enumerate(row, start=1):
            assert (int(v) >> (w - i)) & 1 == 1
