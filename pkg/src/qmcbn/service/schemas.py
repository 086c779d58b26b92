"""Request/response models for the HTTP service.

Requests carry file *contents* (network text, evidence text, direction-number
text), never paths, so a remote server needs no shared filesystem.
"""

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    name: str
    version: str


class GeneratePointsRequest(BaseModel):
    method: str = Field(description="one of mc, halton, sobol, faure")
    dimension: int = Field(ge=1)
    count: int = Field(ge=1)
    start_index: int = Field(default=1, ge=1, description="first sequence index (QMC methods)")
    seed: int = Field(default=0, description="PRNG seed (mc only)")
    direction_numbers: str | None = Field(default=None, description="direction-number file text")


class PointsResponse(BaseModel):
    method: str
    dimension: int
    points: list[list[float]]


class DirectionSearchRequest(BaseModel):
    dimensions: int = Field(ge=1)
    candidates: int = Field(default=64, ge=1)
    points: int = Field(default=1024, ge=1)
    grid: int = Field(default=32, ge=1)
    window: int = Field(default=8, ge=1)
    seed: int = 0
    include_log: bool = False


class DirectionSearchResponse(BaseModel):
    direction_numbers: str
    log: str | None = None


class DiscrepancyRequest(BaseModel):
    points: list[list[float]]
    grid: int = Field(default=32, ge=1)
    star: bool = True


class DiscrepancyResponse(BaseModel):
    count: int
    dimension: int
    cell_uniformity: float | None = None
    star_discrepancy: float | None = None


class NetworkValidateRequest(BaseModel):
    network: str


class NetworkValidateResponse(BaseModel):
    name: str
    nodes: int
    topological_order: list[str]


class ExactInferenceRequest(BaseModel):
    network: str
    evidence: str | None = None


class MarginalsResponse(BaseModel):
    network: str
    states: dict[str, list[str]]
    marginals: dict[str, list[float]]
    prob_evidence: float | None = None


class EstimateRequest(BaseModel):
    network: str
    evidence: str | None = None
    method: str = "sobol"
    samples: int = Field(ge=1)
    seed: int = 0
    direction_numbers: str | None = None
    icpt: str | None = None


class EstimateResponse(BaseModel):
    network: str
    method: str
    states: dict[str, list[str]]
    marginals: dict[str, list[float]]
    prob_evidence_estimate: float
    samples_used: int
    weight_sum: float
    weight_sumsq: float


class BenchmarkRequest(BaseModel):
    network: str
    evidence: str | None = None
    methods: list[str] = Field(min_length=1)
    min_samples: int = Field(default=250, ge=1)
    doublings: int = Field(default=10, ge=1)
    mc_runs: int = Field(default=10, ge=1)
    seed: int = 0
    direction_numbers: str | None = None
    icpt: str | None = None


class BenchmarkResponse(BaseModel):
    network: str
    csv: str
    plot_data: str
    alphas: dict[str, float]
    intercepts: dict[str, float]
    exact_provenance: str
