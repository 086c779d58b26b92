"""Convergence benchmark: RMSE against exact marginals over a doubling sample schedule.

One stream per (method, run) is extended across the schedule, so the estimate
at 2N reuses the first N samples. Monte Carlo runs mcRuns times with seeds
base+run and its fitted curve uses the per-N mean; the deterministic methods
run once. Output ordering and float formatting are fixed so identical specs
produce byte-identical CSV.
"""

from dataclasses import dataclass, field

import numpy as np

from .bn import BayesNet, Evidence, variable_elimination
from .errors import ParseError
from .lds import DirectionTable, FaureStream, HaltonStream, SobolGrayStream
from .sampling import (
    ImportanceFunction,
    IsAccumulator,
    PlsAccumulator,
    RandomStream,
    likelihood_weighting_isf,
    rmse_metric,
)

METHODS = ("faure", "halton", "mc", "sobol")


def make_stream(
    method: str,
    dim: int,
    seed: int = 0,
    direction_table: DirectionTable | None = None,
    n_max: int | None = None,
    start: int = 1,
):
    """Build a number stream for one of the four methods."""
    if method == "mc":
        return RandomStream(dim, seed)
    if method == "halton":
        return HaltonStream(dim, start=start)
    if method == "sobol":
        table = direction_table if direction_table is not None else default_direction_table()
        return SobolGrayStream(table, dim)
    if method == "faure":
        cap = max(1 << 20, (n_max or 0) + 1)
        return FaureStream(dim, n_max=cap, start=start)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


_DEFAULT_TABLE: DirectionTable | None = None


def default_direction_table() -> DirectionTable:
    """Direction numbers shipped with the package (see data/sobol_directions.txt)."""
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        from importlib.resources import files

        text = files("qmcbn.data").joinpath("sobol_directions.txt").read_text()
        _DEFAULT_TABLE = DirectionTable.from_text(text)
    return _DEFAULT_TABLE


@dataclass
class ExperimentSpec:
    """Everything a convergence run needs; loaded objects, not file paths."""

    network: BayesNet
    methods: tuple[str, ...]
    evidence: Evidence = field(default_factory=Evidence)
    min_samples: int = 250
    doublings: int = 10
    mc_runs: int = 10
    seed: int = 0
    direction_table: DirectionTable | None = None
    isf: ImportanceFunction | None = None

    def __post_init__(self):
        if not self.methods:
            raise ValueError("methods must be non-empty")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; expected subset of {METHODS}")
        if self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")
        if self.doublings < 1:
            raise ValueError("doublings must be >= 1")
        if self.mc_runs < 1:
            raise ValueError("mc_runs must be >= 1")
        self.evidence.validate(self.network)

    def schedule(self) -> list[int]:
        return [self.min_samples * (1 << k) for k in range(self.doublings + 1)]


@dataclass
class ConvergenceReport:
    """(method, N, run, rmse) rows plus the fitted power-law per method."""

    network: str
    min_samples: int
    rows: list[tuple[str, int, int, float]]
    alphas: dict[str, float]
    intercepts: dict[str, float]
    exact_provenance: str


def fit_alpha(points: list[tuple[float, float]]) -> tuple[float, float]:
    """Fit rmse = c * N^(-alpha) by least squares on the log-log points.

    Returns (alpha, c). Every rmse must be positive.
    """
    if len(points) < 2:
        raise ValueError("need at least 2 points to fit")
    ns = np.array([p[0] for p in points], dtype=float)
    es = np.array([p[1] for p in points], dtype=float)
    if (es <= 0).any():
        raise ValueError("all rmse values must be positive to fit a power law")
    if (ns <= 0).any():
        raise ValueError("all sample counts must be positive")
    slope, intercept = np.polyfit(np.log(ns), np.log(es), 1)
    return float(-slope), float(np.exp(intercept))


def run_convergence(spec: ExperimentSpec) -> ConvergenceReport:
    """Run every (method, N, run) cell of the schedule and fit alpha per method."""
    net = spec.network
    exact = variable_elimination(net, spec.evidence)
    evidence_nodes = set(spec.evidence.assignments)
    dim = len(net.nodes) - len(evidence_nodes)
    schedule = spec.schedule()
    max_n = schedule[-1]

    rows: list[tuple[str, int, int, float]] = []
    alphas: dict[str, float] = {}
    intercepts: dict[str, float] = {}
    for method in sorted(set(spec.methods)):
        runs = spec.mc_runs if method == "mc" else 1
        per_n: dict[int, list[float]] = {n: [] for n in schedule}
        for run in range(runs):
            stream = make_stream(
                method,
                dim,
                seed=spec.seed + run,
                direction_table=spec.direction_table,
                n_max=max_n,
            )
            acc = _make_accumulator(net, spec)
            done = 0
            for n in schedule:
                acc.add(stream.take(n - done))
                done = n
                est = acc.result().marginals
                rmse = rmse_metric(est, exact, evidence_nodes)
                rows.append((method, n, run, rmse))
                per_n[n].append(rmse)
        fit_points = [(float(n), float(np.mean(per_n[n]))) for n in schedule]
        try:
            alphas[method], intercepts[method] = fit_alpha(fit_points)
        except ValueError as exc:
            raise ValueError(f"cannot fit alpha for method {method!r}: {exc}") from exc

    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return ConvergenceReport(
        network=net.name,
        min_samples=spec.min_samples,
        rows=rows,
        alphas=alphas,
        intercepts=intercepts,
        exact_provenance="variable elimination (min-fill)",
    )


def _make_accumulator(net: BayesNet, spec: ExperimentSpec):
    if spec.evidence:
        isf = spec.isf if spec.isf is not None else likelihood_weighting_isf(net, spec.evidence)
        return IsAccumulator(net, spec.evidence, isf)
    return PlsAccumulator(net)


def emit_results(report: ConvergenceReport, fmt: str = "csv") -> str:
    """Serialize a report: `csv` rows plus alpha summary, or log-log `plot-data` columns."""
    if fmt == "csv":
        lines = ["method,network,samples,run,rmse"]
        for method, n, run, rmse in report.rows:
            lines.append(f"{method},{report.network},{n},{run},{rmse!r}")
        for method in sorted(report.alphas):
            lines.append(f"# alpha,{method},{report.alphas[method]!r}")
        return "\n".join(lines) + "\n"
    if fmt == "plot-data":
        methods = sorted(report.alphas)
        ns = sorted({n for _, n, _, _ in report.rows})
        lines = ["log2_n_over_min," + ",".join(methods)]
        for n in ns:
            cells = [repr(float(np.log2(n / report.min_samples)))]
            for method in methods:
                vals = [r for m, nn, _, r in report.rows if m == method and nn == n]
                cells.append(repr(float(np.log10(np.mean(vals)))))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'plot-data'")


def parse_results_csv(text: str) -> tuple[list[tuple[str, str, int, int, float]], dict[str, float]]:
    """Inverse of emit_results(..., 'csv'): returns (rows, alphas)."""
    rows = []
    alphas: dict[str, float] = {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "method,network,samples,run,rmse":
        raise ParseError("missing results CSV header", 1)
    for lineno, line in enumerate(lines[1:], start=2):
        if line.startswith("#"):
            fields = line[1:].strip().split(",")
            if len(fields) != 3 or fields[0] != "alpha":
                raise ParseError(f"bad summary line {line!r}", lineno)
            alphas[fields[1]] = float(fields[2])
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise ParseError(f"expected 5 fields, got {len(fields)}", lineno)
        rows.append((fields[0], fields[1], int(fields[2]), int(fields[3]), float(fields[4])))
    return rows, alphas
