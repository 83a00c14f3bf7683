"""HTTP service consumed by the designer UI.

Endpoints: GET/PUT /deal (draft with validation), POST /simulate (runs the
pipeline on the current draft, returns a run id), GET /runs/{id}/status and
per-artifact resources (tranching, features, ndm, cva).  All responses are
JSON; invalid designs come back as 400 with the machine-readable violation
list; unknown runs are 404.
"""

from __future__ import annotations

import csv
import json
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from .dealfile import DealFileError, parse_deal_document
from .pipeline import run_pipeline
from .scenarios import GeneratorConfig


def _csv_to_rows(path: Path) -> list[dict]:
    with path.open() as fh:
        return [
            {key: (float(value) if key != "t" else int(value)) for key, value in row.items()}
            for row in csv.DictReader(fh)
        ]


def create_app(out_root) -> FastAPI:
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    app = FastAPI(title="peal", version="1")
    state: dict = {"draft": None, "runs": {}}
    lock = threading.Lock()

    @app.get("/deal")
    def get_deal():
        if state["draft"] is None:
            raise HTTPException(404, "no deal draft")
        return state["draft"]

    @app.put("/deal")
    async def put_deal(request: Request):
        doc = await request.json()
        try:
            parse_deal_document(doc)
        except DealFileError as exc:
            return JSONResponse({"valid": False, "violations": exc.errors}, status_code=400)
        with lock:
            state["draft"] = doc
        (out_root / "draft.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return {"valid": True, "violations": []}

    @app.post("/simulate")
    async def simulate(request: Request):
        body = await request.json() if await request.body() else {}
        doc = body.get("deal", state["draft"])
        if doc is None:
            raise HTTPException(400, "no deal draft; PUT /deal first")
        try:
            pkg = parse_deal_document(doc)
        except DealFileError as exc:
            return JSONResponse({"valid": False, "violations": exc.errors}, status_code=400)
        gen = pkg.generator
        count = int(body.get("scenarios", gen.count))
        seed = int(body.get("seed", gen.master_seed))
        from dataclasses import replace

        pkg = replace(pkg, generator=GeneratorConfig(count, seed, gen.include_extreme))
        try:
            record = run_pipeline(pkg, out_root)
        except Exception as exc:  # surfaced via the status resource
            run_id = f"failed-{len(state['runs'])}"
            with lock:
                state["runs"][run_id] = {"state": "failed", "error": str(exc)}
            return JSONResponse({"run_id": run_id, "state": "failed"}, status_code=500)
        with lock:
            state["runs"][record.run_id] = {"state": "done", "record": record}
        return {"run_id": record.run_id, "state": "done"}

    def _run_entry(run_id: str):
        entry = state["runs"].get(run_id)
        if entry is None:
            raise HTTPException(404, f"unknown run {run_id}")
        return entry

    def _artifact(run_id: str, name: str) -> Path:
        entry = _run_entry(run_id)
        if entry["state"] != "done":
            raise HTTPException(409, f"run {run_id} is {entry['state']}")
        return Path(entry["record"].artifacts[name])

    @app.get("/runs/{run_id}/status")
    def run_status(run_id: str):
        entry = _run_entry(run_id)
        doc = {"run_id": run_id, "state": entry["state"]}
        if entry["state"] == "done":
            doc["verdicts"] = entry["record"].verdicts
        if entry["state"] == "failed":
            doc["error"] = entry["error"]
        return doc

    @app.get("/runs/{run_id}/tranching")
    def run_tranching(run_id: str):
        return {"rows": _csv_to_rows(_artifact(run_id, "tranching.csv"))}

    @app.get("/runs/{run_id}/ndm")
    def run_ndm(run_id: str):
        return {"rows": _csv_to_rows(_artifact(run_id, "ndm_mean.csv"))}

    @app.get("/runs/{run_id}/features")
    def run_features(run_id: str):
        return json.loads(_artifact(run_id, "features.json").read_text())

    @app.get("/runs/{run_id}/cva")
    def run_cva(run_id: str):
        doc = json.loads(_artifact(run_id, "features.json").read_text())
        return doc["cva"]

    return app
