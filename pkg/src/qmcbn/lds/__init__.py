"""Low-discrepancy sequence generators: Halton, Sobol, and Faure."""

from .faure import DEFAULT_N_MAX, FaureParams, FaureStream, faure_point, faure_points_block
from .gf2 import MAX_SOBOL_DIMENSION, PRIMITIVE_POLYS, poly_for_dimension
from .halton import HaltonStream, halton_point
from .primes import MAX_HALTON_DIMENSION, first_prime_geq, first_primes
from .radical import radical_inverse, radical_inverse_block
from .sobol import (
    W_BITS,
    DirectionTable,
    SobolDimensionParams,
    SobolGrayStream,
    expand_direction_numbers,
    gray_code,
    params_for_dimension,
    sobol_direct_point,
)

__all__ = [
    "DEFAULT_N_MAX",
    "DirectionTable",
    "FaureParams",
    "FaureStream",
    "HaltonStream",
    "MAX_HALTON_DIMENSION",
    "MAX_SOBOL_DIMENSION",
    "PRIMITIVE_POLYS",
    "SobolDimensionParams",
    "SobolGrayStream",
    "W_BITS",
    "expand_direction_numbers",
    "faure_point",
    "faure_points_block",
    "first_prime_geq",
    "first_primes",
    "gray_code",
    "halton_point",
    "params_for_dimension",
    "poly_for_dimension",
    "radical_inverse",
    "radical_inverse_block",
    "sobol_direct_point",
]
