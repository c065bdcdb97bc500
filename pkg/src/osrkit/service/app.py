"""FastAPI application exposing the analysis commands.

Error mapping: tuple parsing problems -> 422, violated mathematical
preconditions and budget limits -> 400, numerical failures -> 500; every
error body carries a ``kind`` the CLI translates into its exit code.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import DomainError, NumericalFailureError, TupleFileError
from . import handlers
from .schemas import (
    CertifyRequest,
    DynamicsRequest,
    JsrRequest,
    OsrRequest,
    Report,
    SymliftRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="osrkit",
        description="Outer spectral radius analysis service",
        version="0.1.0",
    )

    @app.exception_handler(TupleFileError)
    async def _parse_error(_: Request, exc: TupleFileError):
        return JSONResponse(
            status_code=422,
            content={"error": {"kind": "parse", "message": str(exc)}},
        )

    @app.exception_handler(DomainError)
    async def _domain_error(_: Request, exc: DomainError):
        return JSONResponse(
            status_code=400,
            content={"error": {"kind": "domain", "message": str(exc)}},
        )

    @app.exception_handler(NumericalFailureError)
    async def _numerical_error(_: Request, exc: NumericalFailureError):
        return JSONResponse(
            status_code=500,
            content={"error": {"kind": "numerical", "message": str(exc)}},
        )

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.post("/v1/osr", response_model=Report)
    def osr(req: OsrRequest):
        return handlers.run_osr(req)

    @app.post("/v1/jsr", response_model=Report)
    def jsr(req: JsrRequest):
        return handlers.run_jsr(req)

    @app.post("/v1/certify", response_model=Report)
    def certify(req: CertifyRequest):
        return handlers.run_certify(req)

    @app.post("/v1/dynamics", response_model=Report)
    def dynamics(req: DynamicsRequest):
        return handlers.run_dynamics(req)

    @app.post("/v1/symlift", response_model=Report)
    def symlift(req: SymliftRequest):
        return handlers.run_symlift(req)

    return app


app = create_app()
