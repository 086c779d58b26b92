"""Uniformity measures for point sets and the random search for Sobol initial integers.

Two measures live here: the exact star discrepancy (small N, dimension 1 or 2)
and the cheap m^2-cell deviation used to score candidate direction numbers.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import TooLargeError
from .lds.gf2 import poly_for_dimension
from .lds.sobol import W_BITS, DirectionTable, SobolDimensionParams, expand_direction_numbers

STAR_MAX_POINTS = 1 << 12


def cell_uniformity(points: np.ndarray, m: int) -> float:
    """Sum over the m*m grid cells of |points in cell - N/m^2|.

    Points must lie in [0,1)^2; the cell of (x, y) is (floor(x*m), floor(y*m)).
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
        raise ValueError("expected a non-empty (n, 2) point array")
    if m < 1:
        raise ValueError(f"grid divisions must be >= 1, got {m}")
    if (pts < 0).any() or (pts >= 1).any():
        raise ValueError("all coordinates must lie in [0, 1)")
    cells = np.minimum((pts * m).astype(np.int64), m - 1)
    counts = np.bincount(cells[:, 0] * m + cells[:, 1], minlength=m * m)
    # sum |count - N/m^2| exactly: integer deviations scaled by m^2, one division
    return int(np.abs(counts * (m * m) - len(pts)).sum()) / (m * m)


def _cell_uniformity_ints(xi: np.ndarray, yi: np.ndarray, m: int, w_bits: int) -> float:
    """cell_uniformity on integer-scaled coordinates (value = int / 2^w), no float floor."""
    cx = (xi.astype(np.int64) * m) >> w_bits
    cy = (yi.astype(np.int64) * m) >> w_bits
    counts = np.bincount(cx * m + cy, minlength=m * m)
    return int(np.abs(counts * (m * m) - len(xi)).sum()) / (m * m)


def star_discrepancy_exact(points: np.ndarray, d: int | None = None) -> float:
    """Exact star discrepancy for d in {1, 2} and at most 2^12 points.

    The supremum over anchored boxes is attained at box edges approaching point
    coordinates from either side, so it is computed from strict (< v) and
    closed (<= v) counts at every candidate corner.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n, dim = pts.shape
    if d is not None and d != dim:
        raise ValueError(f"declared dimension {d} does not match points of dimension {dim}")
    if n < 1:
        raise ValueError("need at least one point")
    if dim > 2:
        raise TooLargeError(f"exact star discrepancy supports d <= 2, got {dim}")
    if n > STAR_MAX_POINTS:
        raise TooLargeError(f"exact star discrepancy supports N <= {STAR_MAX_POINTS}, got {n}")
    if (pts < 0).any() or (pts >= 1).any():
        raise ValueError("all coordinates must lie in [0, 1)")

    if dim == 1:
        xs = np.sort(pts[:, 0])
        i = np.arange(1, n + 1)
        return float(1 / (2 * n) + np.abs(xs - (2 * i - 1) / (2 * n)).max())

    xs = np.unique(np.append(pts[:, 0], 1.0))
    ys = np.unique(np.append(pts[:, 1], 1.0))
    order = np.argsort(pts[:, 0], kind="stable")
    px, py = pts[order, 0], pts[order, 1]
    best = 0.0
    for x in xs:
        vols = x * ys
        # points strictly inside the open box [0, x) x [0, y)
        inside_x = py[: np.searchsorted(px, x, side="left")]
        inside_sorted = np.sort(inside_x)
        strict = np.searchsorted(inside_sorted, ys, side="left")
        # points inside the closure (coordinates <= the corner)
        closed_x = py[: np.searchsorted(px, x, side="right")]
        closed_sorted = np.sort(closed_x)
        closed = np.searchsorted(closed_sorted, ys, side="right")
        best = max(
            best,
            float((vols - strict / n).max()),
            float((closed / n - vols).max()),
        )
    return best


@dataclass(frozen=True)
class UniformitySearchConfig:
    """Configuration for the per-dimension random search over initial integers."""

    n_dimension: int
    n_random_times: int = 64
    n_points: int = 1024
    grid: int = 32
    window: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.n_dimension < 1:
            raise ValueError("n_dimension must be >= 1")
        if self.n_random_times < 1:
            raise ValueError("n_random_times must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.grid < 1:
            raise ValueError("grid must be >= 1")
        if self.n_points < self.grid * self.grid:
            raise ValueError("n_points must be >= grid^2")


@dataclass
class CandidateRecord:
    """One scored candidate, for the replayable search log."""

    dimension: int
    candidate_index: int
    initial_dirs: tuple[int, ...]
    error_sum: float


@dataclass
class SearchResult:
    params: list[SobolDimensionParams]
    log: list[CandidateRecord] = field(default_factory=list)

    def table(self, w_bits: int = W_BITS) -> DirectionTable:
        return DirectionTable(self.params, w_bits)

    def log_csv(self) -> str:
        lines = ["# dim,candidateIndex,m1..mq,nErrorSum"]
        for rec in self.log:
            ms = ",".join(str(m) for m in rec.initial_dirs)
            lines.append(f"{rec.dimension},{rec.candidate_index},{ms},{rec.error_sum!r}")
        return "\n".join(lines) + "\n"


def _gray_dimension_ints(directions: list[int], count: int, w_bits: int) -> np.ndarray:
    """First `count` Gray-stream integer points of a single dimension."""
    ns = np.arange(1, count + 1, dtype=np.int64)
    grays = ns ^ (ns >> 1)
    dirs = np.asarray(directions, dtype=np.int64)
    x = np.zeros(count, dtype=np.int64)
    for bit in range(int(grays.max()).bit_length()):
        selected = ((grays >> bit) & 1).astype(bool)
        x[selected] ^= dirs[bit]
    return x


def _expanded_for_search(params: SobolDimensionParams, w_bits: int) -> list[int]:
    # same special case as DirectionTable: degree 1 is van der Corput
    if params.degree == 1:
        return [1 << (w_bits - i) for i in range(1, w_bits + 1)]
    return expand_direction_numbers(params, w_bits)


def search_direction_numbers(
    cfg: UniformitySearchConfig, w_bits: int = W_BITS, keep_log: bool = False
) -> SearchResult:
    """Random search for initial direction integers, one dimension at a time.

    For each dimension the candidate minimizing the windowed sum of pairwise
    cell-uniformity deviations against the already-settled dimensions wins;
    ties go to the earliest draw. Deterministic for a fixed seed.
    """
    poly_for_dimension(cfg.n_dimension)  # fail early if the table is too small
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    settled: list[SobolDimensionParams] = []
    settled_ints: list[np.ndarray] = []
    log: list[CandidateRecord] = []

    for dim in range(1, cfg.n_dimension + 1):
        degree, coeffs = poly_for_dimension(dim)
        best: tuple[float, int] | None = None
        best_params = None
        best_ints = None
        for cand in range(cfg.n_random_times):
            ms = tuple(2 * int(rng.integers(0, 1 << (i - 1))) + 1 for i in range(1, degree + 1))
            params = SobolDimensionParams(degree, coeffs, ms)
            ints = _gray_dimension_ints(_expanded_for_search(params, w_bits), cfg.n_points, w_bits)
            error_sum = 0.0
            for k in range(max(1, dim - cfg.window), dim):
                error_sum += _cell_uniformity_ints(settled_ints[k - 1], ints, cfg.grid, w_bits)
            if keep_log:
                log.append(CandidateRecord(dim, cand, ms, error_sum))
            if best is None or (error_sum, cand) < best:
                best = (error_sum, cand)
                best_params, best_ints = params, ints
        settled.append(best_params)
        settled_ints.append(best_ints)

    return SearchResult(settled, log)
