"""HTTP service: draft validation, simulation runs, artifact resources."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from peal.service import create_app

DEMO = Path(__file__).resolve().parent.parent / "deals" / "demo.json"


@pytest.fixture()
def client(tmp_path):
    with TestClient(create_app(tmp_path / "runs")) as tc:
        yield tc


@pytest.fixture()
def demo_doc():
    doc = json.loads(DEMO.read_text())
    doc["scenarios"]["count"] = 20
    return doc


def test_no_draft_yet(client):
    assert client.get("/deal").status_code == 404
    assert client.post("/simulate", content=b"").status_code == 400


def test_put_invalid_deal_returns_violations(client, demo_doc):
    demo_doc["portfolios"] = []
    demo_doc["alpha"] = "7"
    resp = client.put("/deal", json=demo_doc)
    assert resp.status_code == 400
    body = resp.json()
    assert body["valid"] is False
    assert any("K >= 1" in v for v in body["violations"])
    assert any(v.startswith("alpha") for v in body["violations"])
    # The bad document never becomes the draft.
    assert client.get("/deal").status_code == 404


def test_draft_round_trip(client, demo_doc):
    resp = client.put("/deal", json=demo_doc)
    assert resp.status_code == 200 and resp.json()["valid"] is True
    assert client.get("/deal").json() == demo_doc


def test_simulate_and_fetch_artifacts(client, demo_doc):
    client.put("/deal", json=demo_doc)
    resp = client.post("/simulate", json={})
    assert resp.status_code == 200
    run_id = resp.json()["run_id"]
    assert resp.json()["state"] == "done"

    status = client.get(f"/runs/{run_id}/status").json()
    assert status["state"] == "done"
    assert set(status["verdicts"]) == {"g_check", "cva_non_crossing"}

    tranching = client.get(f"/runs/{run_id}/tranching").json()["rows"]
    assert tranching[0]["t"] == 0
    assert {"flt", "slt", "clt"} <= set(tranching[0])

    ndm = client.get(f"/runs/{run_id}/ndm").json()["rows"]
    assert len(ndm) == len(tranching)

    cva = client.get(f"/runs/{run_id}/cva").json()
    assert set(cva) >= {"curves", "cumulative", "crossing", "crossing_pairs"}
    assert cva["crossing"] == (not status["verdicts"]["cva_non_crossing"])

    features = client.get(f"/runs/{run_id}/features").json()
    assert "fair_value" in features and "substantial_margin" in features


def test_simulate_overrides_change_the_run_id(client, demo_doc):
    client.put("/deal", json=demo_doc)
    base = client.post("/simulate", json={}).json()["run_id"]
    reseeded = client.post("/simulate", json={"seed": 999}).json()["run_id"]
    assert reseeded != base
    repeat = client.post("/simulate", json={}).json()["run_id"]
    assert repeat == base


def test_unknown_run_is_404(client):
    assert client.get("/runs/deadbeef/status").status_code == 404
    assert client.get("/runs/deadbeef/features").status_code == 404
