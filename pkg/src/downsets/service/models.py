"""Request and response schemas for the HTTP service.

The poset document shape mirrors the JSON file format: an element list with
ids and optional labels, a pair list, and a closed flag saying whether the
pairs are the full relation or covers.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field


class PosetElement(BaseModel):
    id: int = Field(ge=0)
    label: str | None = None


class PosetDoc(BaseModel):
    elements: list[PosetElement]
    leq: list[tuple[int, int]] = []
    closed: bool = True


class Violation(BaseModel):
    axiom: str
    witness: list[int]


class ValidateRequest(BaseModel):
    poset: PosetDoc


class ValidateResponse(BaseModel):
    valid: bool
    n: int | None = None
    ids: list[int] | None = None
    maximal: list[int] | None = None
    minimal: list[int] | None = None
    violation: Violation | None = None


class IntervalsRequest(BaseModel):
    poset: PosetDoc
    mode: Literal["count", "enumerate"] = "count"
    max_enum: int | None = Field(default=None, ge=1)


class IntervalsResponse(BaseModel):
    count: int
    intervals: list[list[int]] | None = None


Family = Literal[
    "range-strong",
    "sep",
    "two-chain",
    "truefalse",
    "omega-omegastar",
    "antichain-ext",
    "wkl",
]


class GadgetMeta(BaseModel):
    family: Family
    f: list[int]
    g: list[int] | None = None
    horizon: int = Field(ge=0)
    copies: bool = False


class DecomposeRequest(BaseModel):
    poset: PosetDoc
    gadget: GadgetMeta | None = None


class DecomposeResponse(BaseModel):
    witness: list[int]
    parts: list[list[int]]
    decoded: list[int] | None = None
    decoder: dict | None = None


class SeparateRequest(BaseModel):
    poset: PosetDoc
    a: list[int]
    b: list[int]
    depth: int | None = Field(default=None, ge=0)


class SeparateResponse(BaseModel):
    interval: list[int]
    tree: list[int] | None = None


class GadgetRequest(BaseModel):
    family: Family
    f: list[int] = []
    g: list[int] | None = None
    horizon: int | None = Field(default=None, ge=0)
    copies: bool = False


class GadgetResponse(BaseModel):
    document: dict
    roles: dict[str, int]
    horizon: int
    family: str


class PriorityRule(BaseModel):
    e: int = Field(ge=0)
    value: Literal[0, 1]
    from_stage: int = Field(ge=0)
    y: int | None = Field(default=None, ge=0)


class PriorityRequest(BaseModel):
    horizon: int = Field(ge=1)
    stages: int = Field(ge=0)
    rules: list[PriorityRule] | None = None
    slice_size: int | None = Field(default=None, ge=1)


class PriorityResponse(BaseModel):
    transcript: dict
    verify: dict
    slice_size: int


class CensusRequest(BaseModel):
    max_n: int = Field(ge=0, le=7)
    factorization: bool = True
    restriction: bool = True
    random_count: int = Field(default=0, ge=0)
    random_min: int = Field(default=7, ge=1)
    random_max: int = Field(default=10, ge=1)
    seed: int = 0


class CensusResponse(BaseModel):
    report: dict
