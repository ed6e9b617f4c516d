"""FastAPI app exposing the two engines and the table-reproduction runner.

The handlers are plain functions over the pydantic models so that the
command-line client can call them in process; the routes simply wrap them.
Validation errors map to 422 (client) and convergence failures to 409.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from spectra import __version__, runner
from spectra.errors import ConvergenceError
from spectra.service.models import (
    CellModel,
    CurvesRequest,
    PlateauRequest,
    PlateauResponse,
    RunRequest,
    RunResponse,
    TablesRequest,
    TablesResponse,
)


def handle_run(req: RunRequest) -> RunResponse:
    try:
        report = runner.run_spectrum(
            req.params.to_params(),
            method=req.method,
            aim_cfg=req.aim.to_config(),
            hdm_cfg=req.hdm.to_config(),
        )
    except (ValueError,) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except ConvergenceError as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return RunResponse.from_report(report)


def handle_tables(req: TablesRequest) -> TablesResponse:
    try:
        report = runner.reproduce_tables(
            methods=tuple(req.methods),
            tolerance=req.tolerance,
            columns=tuple(req.columns) if req.columns is not None else None,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    cells = [
        CellModel(
            column=c.column,
            method=c.method,
            level=c.level,
            reference=c.reference,
            computed=c.computed,
            diff=c.diff,
            tolerance=c.tolerance,
            tolerance_kind=c.tolerance_kind,
            ok=c.ok,
        )
        for c in report.cells
    ]
    return TablesResponse(
        ok=report.ok, cells=cells, notes=list(report.notes), text=runner.format_tables_report(report)
    )


def handle_curves(req: CurvesRequest) -> str:
    try:
        return runner.emit_curves(
            req.params.to_params(), r_max=req.r_max, points=req.points, which=req.which
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


def handle_plateau(req: PlateauRequest) -> PlateauResponse:
    try:
        scan = runner.run_plateau(
            req.params.to_params(),
            req.hdm.to_config(),
            mu_lo=req.mu_lo,
            mu_hi=req.mu_hi,
            steps=req.steps,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return PlateauResponse(
        mu_grid=list(scan.mu_grid),
        spectra=[list(s) for s in scan.spectra],
        ground_digits=list(scan.ground_digits),
        window=scan.window,
        recommended_mu=scan.recommended_mu,
        no_plateau=scan.no_plateau,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="spectra", version=__version__)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest) -> RunResponse:
        return handle_run(req)

    @app.post("/tables", response_model=TablesResponse)
    def tables(req: TablesRequest) -> TablesResponse:
        return handle_tables(req)

    @app.post("/curves", response_class=PlainTextResponse)
    def curves(req: CurvesRequest) -> str:
        return handle_curves(req)

    @app.post("/plateau", response_model=PlateauResponse)
    def plateau(req: PlateauRequest) -> PlateauResponse:
        return handle_plateau(req)

    return app


app = create_app()
