"""FastAPI application exposing the engine over HTTP."""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import (
    DegenerateEstimateError,
    ImpossibleEvidenceError,
    ParseError,
    QmcbnError,
    SupportViolationError,
    TooLargeError,
)
from . import handlers, schemas

_UNPROCESSABLE = (
    ImpossibleEvidenceError,
    DegenerateEstimateError,
    SupportViolationError,
    TooLargeError,
)


def create_app() -> FastAPI:
    app = FastAPI(title="qmcbn", description="Quasi-Monte Carlo inference for discrete Bayesian networks")

    @app.exception_handler(QmcbnError)
    async def _domain_error(request: Request, exc: QmcbnError):
        status = 422 if isinstance(exc, _UNPROCESSABLE) else 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return handlers.health()

    @app.post("/sequence/points", response_model=schemas.PointsResponse)
    def generate_points(req: schemas.GeneratePointsRequest):
        return handlers.generate_points(req)

    @app.post("/sequence/direction-numbers", response_model=schemas.DirectionSearchResponse)
    def search_directions(req: schemas.DirectionSearchRequest):
        return handlers.search_directions(req)

    @app.post("/discrepancy", response_model=schemas.DiscrepancyResponse)
    def discrepancy(req: schemas.DiscrepancyRequest):
        return handlers.discrepancy_measures(req)

    @app.post("/network/validate", response_model=schemas.NetworkValidateResponse)
    def validate_network(req: schemas.NetworkValidateRequest):
        return handlers.validate_network(req)

    @app.post("/inference/exact", response_model=schemas.MarginalsResponse)
    def exact_inference(req: schemas.ExactInferenceRequest):
        return handlers.exact_inference(req)

    @app.post("/inference/estimate", response_model=schemas.EstimateResponse)
    def estimate(req: schemas.EstimateRequest):
        return handlers.estimate(req)

    @app.post("/benchmark", response_model=schemas.BenchmarkResponse)
    def benchmark(req: schemas.BenchmarkRequest):
        return handlers.benchmark(req)

    return app


app = create_app()
