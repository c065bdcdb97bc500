"""Pydantic request/response models for the analysis service."""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class TupleDocument(BaseModel):
    """Wire form of a tuple file: [re, im] entry pairs, row-major."""

    n: int
    d: int
    matrices: list
    name: Optional[str] = None


class CommonOptions(BaseModel):
    """Tolerance/budget overrides; None keeps the documented default."""

    tol: Optional[float] = Field(default=None, description="eigenvalue clustering tolerance")
    q_max: Optional[int] = None
    budget_words: Optional[int] = None
    budget_dim: Optional[int] = None
    budget_sym: Optional[int] = None
    seed: Optional[int] = Field(default=None, description="echoed for reproducibility")


class OsrRequest(BaseModel):
    matrix_tuple: TupleDocument = Field(alias="tuple")
    k: list[int] = Field(default=[1, 2, 4, 8], description="Gelfand sequence indices")
    options: CommonOptions = CommonOptions()

    model_config = {"populate_by_name": True}


class JsrRequest(BaseModel):
    matrix_tuple: TupleDocument = Field(alias="tuple")
    methods: list[str] = Field(default=["words", "osr", "kron", "sym"])
    k: list[int] = Field(default=[1, 2], description="lift parameters")
    k_max: int = Field(default=8, description="word enumeration depth")
    options: CommonOptions = CommonOptions()

    model_config = {"populate_by_name": True}


class CertifyRequest(BaseModel):
    matrix_tuple: TupleDocument = Field(alias="tuple")
    target: Optional[float] = Field(
        default=None, description="row-norm target; default certifies against 1"
    )
    options: CommonOptions = CommonOptions()

    model_config = {"populate_by_name": True}


class DynamicsRequest(BaseModel):
    matrix_tuple: TupleDocument = Field(alias="tuple")
    options: CommonOptions = CommonOptions()

    model_config = {"populate_by_name": True}


class SymliftRequest(BaseModel):
    matrix_tuple: TupleDocument = Field(alias="tuple")
    k: list[int] = Field(default=[1], description="half-degrees; degree 2k is lifted")
    dump_basis: bool = True
    options: CommonOptions = CommonOptions()

    model_config = {"populate_by_name": True}


class InputEcho(BaseModel):
    digest: str
    name: Optional[str] = None
    n: int
    d: int


class Report(BaseModel):
    """Envelope for every command; timings are excluded from determinism."""

    command: str
    input: InputEcho
    config: dict[str, Any]
    results: dict[str, Any]
    warnings: list[str]
    timings: dict[str, float]


class ErrorBody(BaseModel):
    kind: str      # parse | domain | numerical
    message: str


class ErrorEnvelope(BaseModel):
    error: ErrorBody
