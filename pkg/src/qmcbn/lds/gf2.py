"""Primitive polynomials over GF(2) for seeding per-dimension bit recurrences.

The frozen table lists every primitive polynomial of degree 1 through 11,
sorted by degree and then by coefficient encoding, 336 entries in total.
Entry j (1-based) is the polynomial used for dimension j of the binary
low-discrepancy sequence; the table therefore supports up to 336 dimensions.

Each entry is (degree q, interior bits): the polynomial is
x^q + a_1 x^(q-1) + ... + a_(q-1) x + 1 and the interior bits encode
a_1..a_(q-1) with a_1 in the most significant position.
"""

from ..errors import UnsupportedDimensionError

PRIMITIVE_POLYS: tuple[tuple[int, int], ...] = (
    (1, 0), (2, 1), (3, 1), (3, 2), (4, 1), (4, 4),
    (5, 2), (5, 4), (5, 7), (5, 11), (5, 13), (5, 14),
    (6, 1), (6, 13), (6, 16), (6, 19), (6, 22), (6, 25),
    (7, 1), (7, 4), (7, 7), (7, 8), (7, 14), (7, 19),
    (7, 21), (7, 28), (7, 31), (7, 32), (7, 37), (7, 41),
    (7, 42), (7, 50), (7, 55), (7, 56), (7, 59), (7, 62),
    (8, 14), (8, 21), (8, 22), (8, 38), (8, 47), (8, 49),
    (8, 50), (8, 52), (8, 56), (8, 67), (8, 70), (8, 84),
    (8, 97), (8, 103), (8, 115), (8, 122), (9, 8), (9, 13),
    (9, 16), (9, 22), (9, 25), (9, 44), (9, 47), (9, 52),
    (9, 55), (9, 59), (9, 62), (9, 67), (9, 74), (9, 81),
    (9, 82), (9, 87), (9, 91), (9, 94), (9, 103), (9, 104),
    (9, 109), (9, 122), (9, 124), (9, 137), (9, 138), (9, 143),
    (9, 145), (9, 152), (9, 157), (9, 167), (9, 173), (9, 176),
    (9, 181), (9, 182), (9, 185), (9, 191), (9, 194), (9, 199),
    (9, 218), (9, 220), (9, 227), (9, 229), (9, 230), (9, 234),
    (9, 236), (9, 241), (9, 244), (9, 253), (10, 4), (10, 13),
    (10, 19), (10, 22), (10, 50), (10, 55), (10, 64), (10, 69),
    (10, 98), (10, 107), (10, 115), (10, 121), (10, 127), (10, 134),
    (10, 140), (10, 145), (10, 152), (10, 158), (10, 161), (10, 171),
    (10, 181), (10, 194), (10, 199), (10, 203), (10, 208), (10, 227),
    (10, 242), (10, 251), (10, 253), (10, 265), (10, 266), (10, 274),
    (10, 283), (10, 289), (10, 295), (10, 301), (10, 316), (10, 319),
    (10, 324), (10, 346), (10, 352), (10, 361), (10, 367), (10, 382),
    (10, 395), (10, 398), (10, 400), (10, 412), (10, 419), (10, 422),
    (10, 426), (10, 428), (10, 433), (10, 446), (10, 454), (10, 457),
    (10, 472), (10, 493), (10, 505), (10, 508), (11, 2), (11, 11),
    (11, 21), (11, 22), (11, 35), (11, 49), (11, 50), (11, 56),
    (11, 61), (11, 70), (11, 74), (11, 79), (11, 84), (11, 88),
    (11, 103), (11, 104), (11, 112), (11, 115), (11, 117), (11, 122),
    (11, 134), (11, 137), (11, 146), (11, 148), (11, 157), (11, 158),
    (11, 162), (11, 164), (11, 168), (11, 173), (11, 185), (11, 186),
    (11, 191), (11, 193), (11, 199), (11, 213), (11, 214), (11, 220),
    (11, 227), (11, 236), (11, 242), (11, 251), (11, 256), (11, 259),
    (11, 265), (11, 266), (11, 276), (11, 292), (11, 304), (11, 310),
    (11, 316), (11, 319), (11, 322), (11, 328), (11, 334), (11, 339),
    (11, 341), (11, 345), (11, 346), (11, 362), (11, 367), (11, 372),
    (11, 375), (11, 376), (11, 381), (11, 385), (11, 388), (11, 392),
    (11, 409), (11, 415), (11, 416), (11, 421), (11, 428), (11, 431),
    (11, 434), (11, 439), (11, 446), (11, 451), (11, 453), (11, 457),
    (11, 458), (11, 471), (11, 475), (11, 478), (11, 484), (11, 493),
    (11, 494), (11, 499), (11, 502), (11, 517), (11, 518), (11, 524),
    (11, 527), (11, 555), (11, 560), (11, 565), (11, 569), (11, 578),
    (11, 580), (11, 587), (11, 589), (11, 590), (11, 601), (11, 607),
    (11, 611), (11, 614), (11, 617), (11, 618), (11, 625), (11, 628),
    (11, 635), (11, 641), (11, 647), (11, 654), (11, 659), (11, 662),
    (11, 672), (11, 675), (11, 682), (11, 684), (11, 689), (11, 695),
    (11, 696), (11, 713), (11, 719), (11, 724), (11, 733), (11, 734),
    (11, 740), (11, 747), (11, 749), (11, 752), (11, 755), (11, 762),
    (11, 770), (11, 782), (11, 784), (11, 787), (11, 789), (11, 793),
    (11, 796), (11, 803), (11, 805), (11, 810), (11, 815), (11, 824),
    (11, 829), (11, 830), (11, 832), (11, 841), (11, 847), (11, 849),
    (11, 861), (11, 871), (11, 878), (11, 889), (11, 892), (11, 901),
    (11, 908), (11, 920), (11, 923), (11, 942), (11, 949), (11, 950),
    (11, 954), (11, 961), (11, 968), (11, 971), (11, 973), (11, 979),
    (11, 982), (11, 986), (11, 998), (11, 1001), (11, 1010), (11, 1012),)

MAX_SOBOL_DIMENSION = len(PRIMITIVE_POLYS)

_POLY_SET = frozenset(PRIMITIVE_POLYS)


def poly_for_dimension(dim: int) -> tuple[int, int]:
    """Return (degree, interior bits) of the polynomial assigned to dimension `dim` (1-based)."""
    if dim < 1:
        raise ValueError(f"dimension must be >= 1, got {dim}")
    if dim > MAX_SOBOL_DIMENSION:
        raise UnsupportedDimensionError(
            f"dimension {dim} exceeds the embedded polynomial table ({MAX_SOBOL_DIMENSION} entries)"
        )
    return PRIMITIVE_POLYS[dim - 1]


def is_listed_primitive(degree: int, interior: int) -> bool:
    """Membership test against the embedded table."""
    return (degree, interior) in _POLY_SET
