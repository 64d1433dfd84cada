"""Request handlers: validated models in, RunResult out.

Pure functions with no HTTP types, so the CLI can call them in-process and
behave exactly like a service client.  Core errors propagate for the caller
to map (HTTP status or exit code).
"""

from __future__ import annotations

from ..pipeline import (
    PipelineConfig,
    run_approx,
    run_invert,
    run_sample,
    run_transform,
    run_verify,
)
from ..serialize import dist_from_json
from ..transform import GridSpec
from .models import (
    ApproxRequest,
    InvertRequest,
    SampleRequest,
    TransformRequest,
    VerifyRequest,
)

__all__ = [
    "handle_approx",
    "handle_sample",
    "handle_transform",
    "handle_invert",
    "handle_verify",
]


def _dist(model, location):
    return dist_from_json(model.model_dump(), location)


def _grid(model):
    if model is None:
        return None
    return GridSpec(
        complex(model.center_re, model.center_im),
        model.radius,
        model.resolution,
    )


def _schedule(raw):
    return tuple((int(m), int(n)) for m, n in raw) if raw is not None else None


def handle_approx(req: ApproxRequest):
    ks = req.k if isinstance(req.k, list) else [req.k]
    config = PipelineConfig(
        inputs=(_dist(req.t, "$.t"), _dist(req.s, "$.s")),
        k_values=tuple(int(k) for k in ks),
        schedule=_schedule(req.schedule),
        seed=req.seed,
    )
    return run_approx(config)


def handle_sample(req: SampleRequest):
    config = PipelineConfig(
        inputs=(_dist(req.input, "$.input"),),
        k_values=(int(req.k),) if req.k is not None else None,
        schedule=_schedule(req.schedule),
    )
    return run_sample(config)


def handle_transform(req: TransformRequest):
    config = PipelineConfig(
        inputs=tuple(
            _dist(m, f"$.inputs[{i}]") for i, m in enumerate(req.inputs)
        ),
        grid=_grid(req.grid),
    )
    return run_transform(config)


def handle_invert(req: InvertRequest):
    config = PipelineConfig(inputs=(_dist(req.input, "$.input"),))
    return run_invert(config)


def handle_verify(req: VerifyRequest):
    return run_verify(req.root)
