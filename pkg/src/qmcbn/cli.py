"""Command-line client for the engine.

Every subcommand builds the same request model the HTTP service accepts and
dispatches it either in-process (default) or to a running server given with
--server. File reading/writing happens only here; requests carry contents.
"""

import sys

import click

from .errors import QmcbnError
from .service import handlers, schemas


class Dispatcher:
    """Routes a request model to the in-process handler or a remote server."""

    routes = {
        "/sequence/points": (handlers.generate_points, schemas.PointsResponse),
        "/sequence/direction-numbers": (handlers.search_directions, schemas.DirectionSearchResponse),
        "/discrepancy": (handlers.discrepancy_measures, schemas.DiscrepancyResponse),
        "/network/validate": (handlers.validate_network, schemas.NetworkValidateResponse),
        "/inference/exact": (handlers.exact_inference, schemas.MarginalsResponse),
        "/inference/estimate": (handlers.estimate, schemas.EstimateResponse),
        "/benchmark": (handlers.benchmark, schemas.BenchmarkResponse),
    }

    def __init__(self, server: str | None):
        self.server = server.rstrip("/") if server else None

    def call(self, path: str, request):
        handler, response_model = self.routes[path]
        if self.server is None:
            return handler(request)
        import httpx

        resp = httpx.post(
            f"{self.server}{path}", json=request.model_dump(), timeout=3600.0
        )
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise click.ClickException(f"server returned {resp.status_code}: {detail}")
        return response_model(**resp.json())


def _read(path: str) -> str:
    with open(path, "r", encoding="ascii") as f:
        return f.read()


def _write_output(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="ascii") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


@click.group()
@click.option("--server", default=None, help="Base URL of a running qmcbn server (default: in-process).")
@click.pass_context
def main(ctx, server):
    """Quasi-Monte Carlo sampling engine for discrete Bayesian networks."""
    ctx.obj = Dispatcher(server)


@main.command()
@click.option("--method", type=click.Choice(["mc", "halton", "sobol", "faure"]), required=True)
@click.option("--dim", type=int, required=True, help="Point dimension.")
@click.option("--count", type=int, required=True, help="Number of points to emit.")
@click.option("--start", type=int, default=1, show_default=True, help="First sequence index.")
@click.option("--seed", type=int, default=0, show_default=True, help="PRNG seed (mc only).")
@click.option("--direction-numbers", type=click.Path(), default=None, help="Sobol direction-number file.")
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def gen(dispatcher, method, dim, count, start, seed, direction_numbers, output):
    """Emit raw sequence points, one point per line."""
    try:
        req = schemas.GeneratePointsRequest(
            method=method,
            dimension=dim,
            count=count,
            start_index=start,
            seed=seed,
            direction_numbers=_read(direction_numbers) if direction_numbers else None,
        )
        resp = dispatcher.call("/sequence/points", req)
        lines = [" ".join(repr(x) for x in row) for row in resp.points]
        _write_output("\n".join(lines) + "\n", output)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


@main.command()
@click.option("--dimensions", type=int, required=True, help="Dimensions to configure.")
@click.option("--candidates", type=int, default=64, show_default=True, help="Random draws per dimension.")
@click.option("--points", type=int, default=1024, show_default=True, help="Points scored per candidate.")
@click.option("--grid", type=int, default=32, show_default=True, help="Grid divisions per axis.")
@click.option("--window", type=int, default=8, show_default=True, help="Pairwise weighting window.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--log", "log_path", type=click.Path(), default=None, help="Write the candidate log CSV here.")
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def dirnums(dispatcher, dimensions, candidates, points, grid, window, seed, log_path, output):
    """Search initial Sobol direction numbers and emit a direction-number file."""
    try:
        req = schemas.DirectionSearchRequest(
            dimensions=dimensions,
            candidates=candidates,
            points=points,
            grid=grid,
            window=window,
            seed=seed,
            include_log=log_path is not None,
        )
        resp = dispatcher.call("/sequence/direction-numbers", req)
        if log_path:
            with open(log_path, "w", encoding="ascii") as f:
                f.write(resp.log or "")
        _write_output(resp.direction_numbers, output)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


@main.command()
@click.option("--points", "points_path", type=click.Path(), required=True, help="Point file (one point per line).")
@click.option("--grid", type=int, default=32, show_default=True, help="Grid divisions for the cell measure.")
@click.option("--star/--no-star", default=True, show_default=True, help="Also compute exact star discrepancy.")
@click.pass_obj
def discrepancy(dispatcher, points_path, grid, star):
    """Uniformity measures of a point file (cell measure needs d=2, star needs d<=2)."""
    try:
        pts = []
        for lineno, line in enumerate(_read(points_path).splitlines(), start=1):
            body = line.split("#", 1)[0].strip()
            if body:
                try:
                    pts.append([float(t) for t in body.split()])
                except ValueError:
                    raise QmcbnError(f"{points_path}:{lineno}: not a point line") from None
        req = schemas.DiscrepancyRequest(points=pts, grid=grid, star=star)
        resp = dispatcher.call("/discrepancy", req)
        lines = [f"count,{resp.count}", f"dimension,{resp.dimension}"]
        if resp.cell_uniformity is not None:
            lines.append(f"cell_uniformity,{resp.cell_uniformity!r}")
        if resp.star_discrepancy is not None:
            lines.append(f"star_discrepancy,{resp.star_discrepancy!r}")
        _write_output("\n".join(lines) + "\n", None)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


def _marginals_csv(states, marginals, trailer: list[str]) -> str:
    lines = ["node,state,probability"]
    for node_id, vec in marginals.items():
        for name, p in zip(states[node_id], vec):
            lines.append(f"{node_id},{name},{p!r}")
    lines.extend(trailer)
    return "\n".join(lines) + "\n"


@main.command()
@click.option("--network", type=click.Path(), required=True)
@click.option("--evidence", type=click.Path(), default=None)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def exact(dispatcher, network, evidence, output):
    """Exact marginals (and Pr(evidence)) by variable elimination."""
    try:
        req = schemas.ExactInferenceRequest(
            network=_read(network), evidence=_read(evidence) if evidence else None
        )
        resp = dispatcher.call("/inference/exact", req)
        trailer = []
        if evidence:
            trailer.append(f"# prob_evidence,{resp.prob_evidence!r}")
        _write_output(_marginals_csv(resp.states, resp.marginals, trailer), output)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


@main.command()
@click.option("--network", type=click.Path(), required=True)
@click.option("--evidence", type=click.Path(), default=None)
@click.option("--method", type=click.Choice(["mc", "halton", "sobol", "faure"]), default="sobol", show_default=True)
@click.option("--samples", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--direction-numbers", type=click.Path(), default=None)
@click.option("--icpt", type=click.Path(), default=None, help="Importance-table file (with evidence).")
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def estimate(dispatcher, network, evidence, method, samples, seed, direction_numbers, icpt, output):
    """One sampling run: logic sampling without evidence, importance sampling with."""
    try:
        req = schemas.EstimateRequest(
            network=_read(network),
            evidence=_read(evidence) if evidence else None,
            method=method,
            samples=samples,
            seed=seed,
            direction_numbers=_read(direction_numbers) if direction_numbers else None,
            icpt=_read(icpt) if icpt else None,
        )
        resp = dispatcher.call("/inference/estimate", req)
        trailer = [f"# samples,{resp.samples_used}"]
        if evidence:
            trailer.append(f"# prob_evidence_estimate,{resp.prob_evidence_estimate!r}")
        _write_output(_marginals_csv(resp.states, resp.marginals, trailer), output)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


@main.command()
@click.option("--network", type=click.Path(), required=True)
@click.option("--evidence", type=click.Path(), default=None)
@click.option("--methods", default="mc,sobol", show_default=True, help="Comma-separated subset of mc,halton,sobol,faure.")
@click.option("--min-samples", type=int, default=250, show_default=True)
@click.option("--doublings", type=int, default=10, show_default=True)
@click.option("--mc-runs", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--direction-numbers", type=click.Path(), default=None)
@click.option("--icpt", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "plot-data"]), default="csv", show_default=True)
@click.option("-o", "--output", type=click.Path(), default=None)
@click.pass_obj
def bench(dispatcher, network, evidence, methods, min_samples, doublings, mc_runs, seed,
          direction_numbers, icpt, fmt, output):
    """Convergence protocol: RMSE vs exact marginals over the doubling schedule."""
    try:
        req = schemas.BenchmarkRequest(
            network=_read(network),
            evidence=_read(evidence) if evidence else None,
            methods=[m.strip() for m in methods.split(",") if m.strip()],
            min_samples=min_samples,
            doublings=doublings,
            mc_runs=mc_runs,
            seed=seed,
            direction_numbers=_read(direction_numbers) if direction_numbers else None,
            icpt=_read(icpt) if icpt else None,
        )
        resp = dispatcher.call("/benchmark", req)
        _write_output(resp.csv if fmt == "csv" else resp.plot_data, output)
    except (QmcbnError, ValueError, OSError) as exc:
        _fail(exc)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
