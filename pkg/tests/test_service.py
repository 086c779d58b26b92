"""HTTP surface: every endpoint over a real ASGI test client."""

import numpy as np
import pytest
from fastapi.testclient import TestClient

from qmcbn import data
from qmcbn.service.app import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    resp = client.get("/health")
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["name"] == "qmcbn"


def test_generate_points_sobol(client):
    resp = client.post(
        "/sequence/points", json={"method": "sobol", "dimension": 2, "count": 3}
    )
    assert resp.status_code == 200
    points = resp.json()["points"]
    assert points[0] == [0.5, 0.5]
    assert len(points) == 3
    assert all(0 <= x < 1 for row in points for x in row)


def test_generate_points_halton_start_index(client):
    resp = client.post(
        "/sequence/points", json={"method": "halton", "dimension": 1, "count": 1, "start_index": 4}
    )
    assert resp.json()["points"] == [[0.125]]


def test_generate_points_bad_method(client):
    resp = client.post("/sequence/points", json={"method": "bogus", "dimension": 2, "count": 1})
    assert resp.status_code == 400
    assert "unknown method" in resp.json()["detail"]


def test_direction_search_deterministic(client):
    req = {"dimensions": 3, "candidates": 8, "seed": 4, "include_log": True}
    a = client.post("/sequence/direction-numbers", json=req).json()
    b = client.post("/sequence/direction-numbers", json=req).json()
    assert a == b
    assert a["direction_numbers"].startswith("# dim degree polyBits")
    assert a["log"].startswith("# dim,candidateIndex")


def test_discrepancy_endpoint(client):
    pts = [[0.25, 0.25], [0.25, 0.75], [0.75, 0.25], [0.75, 0.75]]
    resp = client.post("/discrepancy", json={"points": pts, "grid": 2})
    body = resp.json()
    assert body["count"] == 4 and body["dimension"] == 2
    assert body["cell_uniformity"] == 0.0
    assert body["star_discrepancy"] == pytest.approx(0.4375)


def test_network_validate(client):
    resp = client.post("/network/validate", json={"network": data.read_text("asia.net")})
    body = resp.json()
    assert body["name"] == "asia" and body["nodes"] == 8
    assert len(body["topological_order"]) == 8

    bad = client.post("/network/validate", json={"network": "name x\nnode a\nstates s\nparents\ncpt\n1"})
    assert bad.status_code == 400
    assert "line" in bad.json()["detail"]


def test_exact_endpoint(client):
    resp = client.post(
        "/inference/exact",
        json={"network": data.read_text("asia.net"), "evidence": "dysp yes\nxray yes"},
    )
    body = resp.json()
    assert body["prob_evidence"] > 0
    assert body["marginals"]["dysp"] == [1.0, 0.0]
    for vec in body["marginals"].values():
        assert sum(vec) == pytest.approx(1.0, abs=1e-9)


def test_exact_impossible_evidence(client):
    net = "name d\nnode a\nstates x y\nparents\ncpt\n1.0 0.0\nnode b\nstates x y\nparents a\ncpt\n1 0\n0 1"
    resp = client.post("/inference/exact", json={"network": net, "evidence": "b y"})
    assert resp.status_code == 422
    assert "probability zero" in resp.json()["detail"]


def test_estimate_endpoint_no_evidence(client):
    resp = client.post(
        "/inference/estimate",
        json={"network": data.read_text("asia.net"), "method": "sobol", "samples": 4096},
    )
    body = resp.json()
    assert body["samples_used"] == 4096
    assert body["prob_evidence_estimate"] == 1.0
    exact = client.post("/inference/exact", json={"network": data.read_text("asia.net")}).json()
    errs = [
        abs(a - b)
        for nid in body["marginals"]
        for a, b in zip(body["marginals"][nid], exact["marginals"][nid])
    ]
    assert max(errs) < 0.01


def test_estimate_endpoint_with_icpt(client):
    resp = client.post(
        "/inference/estimate",
        json={
            "network": data.read_text("pinned.net"),
            "evidence": data.read_text("pinned.ev"),
            "icpt": data.read_text("pinned_exact.icpt"),
            "method": "mc",
            "samples": 10,
            "seed": 2,
        },
    )
    body = resp.json()
    assert body["prob_evidence_estimate"] == pytest.approx(0.126, abs=1e-12)
    assert body["marginals"]["r1"] == [1.0, 0.0]
    assert body["marginals"]["r2"] == [1.0, 0.0]


def test_benchmark_endpoint(client):
    req = {
        "network": data.read_text("asia.net"),
        "methods": ["mc", "sobol"],
        "doublings": 2,
        "mc_runs": 2,
        "seed": 9,
    }
    a = client.post("/benchmark", json=req)
    assert a.status_code == 200
    body = a.json()
    assert body["csv"].startswith("method,network,samples,run,rmse")
    assert set(body["alphas"]) == {"mc", "sobol"}
    assert body["exact_provenance"].startswith("variable elimination")
    b = client.post("/benchmark", json=req)
    assert b.json()["csv"] == body["csv"]


def test_benchmark_bad_network(client):
    resp = client.post("/benchmark", json={"network": "garbage", "methods": ["mc"]})
    assert resp.status_code == 400
