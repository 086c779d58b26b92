"""Plain request-model -> response-model functions behind every endpoint.

The CLI calls these directly when no server is configured; the FastAPI app
wraps them with HTTP. Domain errors propagate as package exceptions and are
translated to status codes at the app boundary.
"""

import numpy as np

from .. import bench as bench_mod
from ..bn import Evidence, parse_evidence, parse_network, topological_order, variable_elimination
from ..discrepancy import (
    STAR_MAX_POINTS,
    UniformitySearchConfig,
    cell_uniformity,
    search_direction_numbers,
    star_discrepancy_exact,
)
from ..lds import DirectionTable
from ..sampling import importance_estimate, likelihood_weighting_isf, load_isf_table, pls_estimate
from . import schemas


def health() -> schemas.HealthResponse:
    from importlib.metadata import PackageNotFoundError, version

    try:
        ver = version("qmcbn")
    except PackageNotFoundError:
        ver = "unknown"
    return schemas.HealthResponse(status="ok", name="qmcbn", version=ver)


def _direction_table(text: str | None) -> DirectionTable | None:
    return DirectionTable.from_text(text) if text else None


def generate_points(req: schemas.GeneratePointsRequest) -> schemas.PointsResponse:
    last = req.start_index + req.count - 1
    stream = bench_mod.make_stream(
        req.method,
        req.dimension,
        seed=req.seed,
        direction_table=_direction_table(req.direction_numbers),
        n_max=last,
        start=req.start_index,
    )
    if req.method == "sobol" and req.start_index > 1:
        stream.take(req.start_index - 1)  # Gray-code stream only advances sequentially
    points = stream.take(req.count)
    return schemas.PointsResponse(
        method=req.method, dimension=req.dimension, points=[[float(x) for x in row] for row in points]
    )


def search_directions(req: schemas.DirectionSearchRequest) -> schemas.DirectionSearchResponse:
    cfg = UniformitySearchConfig(
        n_dimension=req.dimensions,
        n_random_times=req.candidates,
        n_points=req.points,
        grid=req.grid,
        window=req.window,
        seed=req.seed,
    )
    result = search_direction_numbers(cfg, keep_log=req.include_log)
    return schemas.DirectionSearchResponse(
        direction_numbers=result.table().to_text(),
        log=result.log_csv() if req.include_log else None,
    )


def discrepancy_measures(req: schemas.DiscrepancyRequest) -> schemas.DiscrepancyResponse:
    pts = np.asarray(req.points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("expected a non-empty list of points")
    n, d = pts.shape
    cell = cell_uniformity(pts, req.grid) if d == 2 else None
    star = None
    if req.star and d <= 2 and n <= STAR_MAX_POINTS:
        star = star_discrepancy_exact(pts)
    return schemas.DiscrepancyResponse(count=n, dimension=d, cell_uniformity=cell, star_discrepancy=star)


def validate_network(req: schemas.NetworkValidateRequest) -> schemas.NetworkValidateResponse:
    net = parse_network(req.network)
    return schemas.NetworkValidateResponse(
        name=net.name, nodes=len(net.nodes), topological_order=topological_order(net)
    )


def _load_net_and_evidence(network_text: str, evidence_text: str | None):
    net = parse_network(network_text)
    evidence = parse_evidence(evidence_text, net) if evidence_text else Evidence({})
    return net, evidence


def _marginal_payload(net, marginals):
    states = {node.id: list(node.states) for node in net.nodes}
    per_node = {nid: [float(x) for x in vec] for nid, vec in marginals.per_node.items()}
    return states, per_node


def exact_inference(req: schemas.ExactInferenceRequest) -> schemas.MarginalsResponse:
    net, evidence = _load_net_and_evidence(req.network, req.evidence)
    result = variable_elimination(net, evidence)
    states, per_node = _marginal_payload(net, result)
    return schemas.MarginalsResponse(
        network=net.name, states=states, marginals=per_node, prob_evidence=result.prob_evidence
    )


def estimate(req: schemas.EstimateRequest) -> schemas.EstimateResponse:
    net, evidence = _load_net_and_evidence(req.network, req.evidence)
    dim = len(net.nodes) - len(evidence.assignments)
    stream = bench_mod.make_stream(
        req.method,
        dim,
        seed=req.seed,
        direction_table=_direction_table(req.direction_numbers),
        n_max=req.samples,
    )
    if evidence:
        isf = (
            load_isf_table(req.icpt, net, evidence)
            if req.icpt
            else likelihood_weighting_isf(net, evidence)
        )
        result = importance_estimate(net, evidence, isf, stream, req.samples)
    else:
        result = pls_estimate(net, stream, req.samples)
    states, per_node = _marginal_payload(net, result.marginals)
    return schemas.EstimateResponse(
        network=net.name,
        method=req.method,
        states=states,
        marginals=per_node,
        prob_evidence_estimate=result.prob_evidence_estimate,
        samples_used=result.samples_used,
        weight_sum=result.weight_sum,
        weight_sumsq=result.weight_sumsq,
    )


def benchmark(req: schemas.BenchmarkRequest) -> schemas.BenchmarkResponse:
    net, evidence = _load_net_and_evidence(req.network, req.evidence)
    isf = load_isf_table(req.icpt, net, evidence) if req.icpt and evidence else None
    spec = bench_mod.ExperimentSpec(
        network=net,
        methods=tuple(req.methods),
        evidence=evidence,
        min_samples=req.min_samples,
        doublings=req.doublings,
        mc_runs=req.mc_runs,
        seed=req.seed,
        direction_table=_direction_table(req.direction_numbers),
        isf=isf,
    )
    report = bench_mod.run_convergence(spec)
    return schemas.BenchmarkResponse(
        network=report.network,
        csv=bench_mod.emit_results(report, "csv"),
        plot_data=bench_mod.emit_results(report, "plot-data"),
        alphas=report.alphas,
        intercepts=report.intercepts,
        exact_provenance=report.exact_provenance,
    )
