"""FastAPI application exposing the pipeline over HTTP.

Status mapping: 400 for malformed or semantically invalid input (including
request-shape errors), 422 for numerical failures (root finding, exhausted
perturbation budgets, Bezout gate), 200 otherwise — a failed residual or
certificate validation is still a 200 with ok=false in the body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..errors import InputError, NumericalError
from ..serialize import error_json
from .handlers import (
    handle_approx,
    handle_invert,
    handle_sample,
    handle_transform,
    handle_verify,
)
from .models import (
    ApproxRequest,
    ErrorResponse,
    InvertRequest,
    RunResponse,
    SampleRequest,
    TransformRequest,
    VerifyRequest,
)

__all__ = ["create_app", "app"]

_ERROR_RESPONSES = {
    400: {"model": ErrorResponse},
    422: {"model": ErrorResponse},
}


def _run_response(result):
    return RunResponse(
        report=result.report, artifacts=result.artifacts, ok=result.ok
    )


def create_app():
    app = FastAPI(
        title="deltacomb",
        description=(
            "Convolution algebra of point-mass distributions: two-stage "
            "unimodular approximation, mollified sampling, transforms, and "
            "growth certificates."
        ),
        version="0.1.0",
    )

    @app.exception_handler(InputError)
    async def _input_error(request: Request, exc: InputError):
        return JSONResponse(status_code=400, content=error_json(exc))

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        return JSONResponse(status_code=422, content=error_json(exc))

    @app.exception_handler(RequestValidationError)
    async def _shape_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = first.get("msg", "invalid request")
        body = {
            "error": {
                "type": "ParseError",
                "message": f"{message} (at {where})" if where else message,
            }
        }
        return JSONResponse(status_code=400, content=body)

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.post(
        "/approx", response_model=RunResponse, responses=_ERROR_RESPONSES
    )
    async def approx(req: ApproxRequest):
        return _run_response(handle_approx(req))

    @app.post(
        "/sample", response_model=RunResponse, responses=_ERROR_RESPONSES
    )
    async def sample(req: SampleRequest):
        return _run_response(handle_sample(req))

    @app.post(
        "/transform", response_model=RunResponse, responses=_ERROR_RESPONSES
    )
    async def transform(req: TransformRequest):
        return _run_response(handle_transform(req))

    @app.post(
        "/invert", response_model=RunResponse, responses=_ERROR_RESPONSES
    )
    async def invert(req: InvertRequest):
        return _run_response(handle_invert(req))

    @app.post(
        "/verify", response_model=RunResponse, responses=_ERROR_RESPONSES
    )
    async def verify(req: VerifyRequest):
        return _run_response(handle_verify(req))

    return app


app = create_app()
