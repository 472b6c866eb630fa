"""FastAPI service wrapping the simulator core.

Single runs and crossover analysis respond synchronously; sweeps run as jobs
polled via /jobs/{id} (or inline with wait=true for small grids).
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..errors import ConfigError, InternalError
from ..radio import RadioConfig, link_adaptation_tables
from . import ops
from .jobs import registry
from .models import (
    CrossoverRequest,
    CrossoverResponse,
    JobStatus,
    RunRequest,
    RunResponse,
    SweepRequest,
    SweepSummary,
    ValidateRequest,
    ValidateResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="xrsim", version=__version__)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/validate", response_model=ValidateResponse)
    def validate(req: ValidateRequest) -> ValidateResponse:
        return ValidateResponse(violations=ops.validate_config(req.scenario.to_config()))

    @app.post("/runs", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        try:
            result = ops.run_scenario(req.scenario.to_config(), req.out_dir)
        except ConfigError as e:
            raise HTTPException(status_code=400, detail=str(e))
        except InternalError as e:
            raise HTTPException(status_code=500, detail=str(e))
        return RunResponse(**result)

    @app.post("/sweeps", response_model=JobStatus)
    def sweeps(req: SweepRequest) -> JobStatus:
        config = req.scenario.to_config()
        violations = ops.validate_config(config)
        if violations:
            raise HTTPException(status_code=400, detail="; ".join(violations))
        job = registry.create()
        if req.wait:
            job.state = "running"
            try:
                result = ops.run_sweep(
                    config, req.out_dir, req.workers, registry.progress_cb(job)
                )
            except ConfigError as e:
                raise HTTPException(status_code=400, detail=str(e))
            job.state = "done"
            job.result = result
            return _job_status(job)
        registry.start(
            job, ops.run_sweep, config, req.out_dir, req.workers, registry.progress_cb(job)
        )
        return _job_status(job)

    @app.get("/jobs/{job_id}", response_model=JobStatus)
    def job_status(job_id: str) -> JobStatus:
        job = registry.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        return _job_status(job)

    @app.post("/crossover", response_model=CrossoverResponse)
    def crossover(req: CrossoverRequest) -> CrossoverResponse:
        try:
            if req.points is not None:
                result = ops.crossover_from_points(req.points, req.thresholds, req.out_dir)
            elif req.sweep_path is not None:
                result = ops.crossover_from_csv(req.sweep_path, req.thresholds, req.out_dir)
            else:
                raise HTTPException(status_code=400, detail="need points or sweep_path")
        except ConfigError as e:
            raise HTTPException(status_code=400, detail=str(e))
        return CrossoverResponse(**result)

    @app.get("/tables/link-adaptation")
    def tables(overhead_frac: float = RadioConfig().overhead_frac) -> dict:
        return link_adaptation_tables(RadioConfig(overhead_frac=overhead_frac))

    return app


def _job_status(job) -> JobStatus:
    with job.lock:
        result = None
        if job.result is not None:
            result = SweepSummary(**job.result)
        return JobStatus(
            job_id=job.job_id,
            state=job.state,
            done=job.done,
            total=job.total,
            error=job.error,
            result=result,
        )


app = create_app()
