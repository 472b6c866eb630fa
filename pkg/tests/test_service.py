import time

import pytest
from fastapi.testclient import TestClient

from xrsim.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


TINY = {
    "duration_ms": 1200.0,
    "warmup_ms": 100.0,
    "seed": 3,
    "traffic": {"frame_rate_fps": 60, "data_rate_bps": 10e6},
    "users": {"count": 2},
}


def test_healthz(client):
    resp = client.get("/healthz")
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"


def test_validate_clean_default(client):
    resp = client.post("/validate", json={"scenario": {}})
    assert resp.status_code == 200
    assert resp.json()["violations"] == []


def test_validate_reports_field_path(client):
    resp = client.post("/validate", json={"scenario": {"radio": {"num_rbs": 0}}})
    assert resp.status_code == 200
    assert any("radio.num_rbs" in v for v in resp.json()["violations"])


def test_unknown_scenario_key_rejected_by_schema(client):
    resp = client.post("/validate", json={"scenario": {"bogus": 1}})
    assert resp.status_code == 422
    assert "bogus" in resp.text


def test_run_returns_summary(client):
    resp = client.post("/runs", json={"scenario": TINY})
    assert resp.status_code == 200
    body = resp.json()
    assert body["summary"]["num_users"] == 2
    assert "digest" in body["summary"]
    assert body["files"] is None


def test_run_writes_bundle(client, tmp_path):
    out = tmp_path / "bundle"
    resp = client.post("/runs", json={"scenario": TINY, "out_dir": str(out)})
    assert resp.status_code == 200
    files = resp.json()["files"]
    assert set(files) == {"scenario.yaml", "frames.csv", "users.csv", "summary.json"}
    assert (out / "manifest.json").exists()


def test_run_invalid_scenario_is_400(client):
    bad = {**TINY, "radio": {"num_rbs": 0}}
    resp = client.post("/runs", json={"scenario": bad})
    assert resp.status_code == 400
    assert "radio.num_rbs" in resp.json()["detail"]


def test_sweep_inline_wait(client):
    scenario = {**TINY, "sweep": {"num_users": [1, 2], "runs_per_point": 2}}
    resp = client.post("/sweeps", json={"scenario": scenario, "wait": True})
    assert resp.status_code == 200
    body = resp.json()
    assert body["state"] == "done"
    assert body["result"]["total_runs"] == 4
    assert len(body["result"]["points"]) == 2


def test_sweep_job_polling(client):
    scenario = {**TINY, "sweep": {"num_users": [1, 2], "runs_per_point": 1}}
    resp = client.post("/sweeps", json={"scenario": scenario})
    assert resp.status_code == 200
    job_id = resp.json()["job_id"]
    deadline = time.monotonic() + 30
    while time.monotonic() < deadline:
        status = client.get(f"/jobs/{job_id}").json()
        if status["state"] in ("done", "failed"):
            break
        time.sleep(0.1)
    assert status["state"] == "done"
    assert status["result"]["total_runs"] == 2


def test_job_unknown_is_404(client):
    assert client.get("/jobs/doesnotexist").status_code == 404


def test_crossover_from_inline_points(client):
    points = []
    for n, v in ((4, 0.00), (8, 0.02), (12, 0.05)):
        points.append({"policy": "PF", "prediction_interval": 0, "num_users": n,
                       "mse_sum": v, "mse_n": 1})
    for n in (4, 8, 12):
        points.append({"policy": "PF", "prediction_interval": 1, "num_users": n,
                       "mse_sum": 0.03, "mse_n": 1})
    resp = client.post("/crossover", json={"points": points, "thresholds": [0.03]})
    assert resp.status_code == 200
    body = resp.json()
    gamma = body["policies"]["PF"]["gamma_points"][0]
    assert gamma["user_count"] == pytest.approx(9.3333, abs=1e-3)


def test_crossover_needs_input(client):
    assert client.post("/crossover", json={}).status_code == 400


def test_tables_endpoint(client):
    resp = client.get("/tables/link-adaptation")
    assert resp.status_code == 200
    assert len(resp.json()["entries"]) == 15
