"""Pydantic request/response models for the HTTP service.

The models check shape (field names, integer-ness, list arities); semantic
validation — rational strings, scalar-mode consistency, grid geometry —
happens in the core parsers, so the service and the CLI reject bad input
identically.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, RootModel

__all__ = [
    "FractionModel",
    "TermModel",
    "DistributionModel",
    "GridModel",
    "ApproxRequest",
    "SampleRequest",
    "TransformRequest",
    "InvertRequest",
    "VerifyRequest",
    "RunResponse",
    "ErrorBody",
    "ErrorResponse",
]


class FractionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    num: int
    den: int


class TermModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    loc: FractionModel
    order: int = Field(ge=0)
    re: Union[int, float, str]
    im: Union[int, float, str]


class DistributionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    mode: Literal["exact", "float"]
    terms: list[TermModel]


class GridModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    center_re: float = 0.0
    center_im: float = 0.0
    radius: float = 1.0
    resolution: int = 101


class ApproxRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    t: DistributionModel
    s: DistributionModel
    k: Union[int, list[int]] = 1
    schedule: Optional[list[tuple[int, int]]] = None
    seed: int = 0


class SampleRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    input: DistributionModel
    k: Optional[int] = None
    schedule: Optional[list[tuple[int, int]]] = None


class TransformRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    inputs: list[DistributionModel] = Field(min_length=1, max_length=2)
    grid: Optional[GridModel] = None


class InvertRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")
    input: DistributionModel


class VerifyRequest(RootModel[dict[str, Any]]):
    """A serialized unimodular quadruple, taken as-is and parsed by the core."""


class RunResponse(BaseModel):
    report: dict[str, Any]
    artifacts: dict[str, str]
    ok: bool


class ErrorBody(BaseModel):
    type: str
    message: str


class ErrorResponse(BaseModel):
    error: ErrorBody
