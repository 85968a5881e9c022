"""Pydantic request/response models for the HTTP service.

These mirror the JSONL record schemas one-to-one so a client can send file
contents as-is; deeper invariants (reserved marker tokens, role_source
consistency) are checked by the corpus validators behind the endpoints.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

Role = Literal["Issue", "Reason", "Conclusion", "NonArgument"]
Format = Literal["raw", "binary", "finegrained"]
Metric = Literal["R1", "R2", "RL"]


class SentenceIn(BaseModel):
    text: str
    role: Role = "NonArgument"


class DocumentIn(BaseModel):
    doc_id: str
    role_source: Literal["oracle", "predicted", "none"]
    sentences: list[SentenceIn] = Field(min_length=1)


class ReferenceIn(BaseModel):
    doc_id: str
    text: str


class CandidateIn(BaseModel):
    doc_id: str
    text: str
    input_format: Format
    beam_width: int = Field(ge=1)
    generator_id: str


class FoldIn(BaseModel):
    fold_id: int = Field(ge=0, le=4)
    train: list[str] = []
    validation: list[str] = []
    test: list[str] = []


class PolicyIn(BaseModel):
    formats: list[Format] = ["raw", "binary", "finegrained"]
    beam_widths: list[int] = [1, 2, 3, 4, 5]
    dedupe: bool = False
    all_beams: bool = False


class MarkRequest(BaseModel):
    documents: list[DocumentIn]
    scheme: Format
    separator: str = " "


class MarkedDocument(BaseModel):
    doc_id: str
    input_format: Format
    input: str


class MarkResponse(BaseModel):
    documents: list[MarkedDocument]


class AugmentRequest(BaseModel):
    documents: list[DocumentIn]
    references: list[ReferenceIn]
    fold: Optional[FoldIn] = None
    separator: str = " "


class TrainingExampleOut(BaseModel):
    doc_id: str
    input_format: Format
    input: str
    target: str


class AugmentResponse(BaseModel):
    train: list[TrainingExampleOut]
    validation: list[TrainingExampleOut]


class RankRequest(BaseModel):
    documents: list[DocumentIn]
    candidates: list[CandidateIn]
    policy: PolicyIn = PolicyIn()
    metric: Metric = "R1"
    stem: bool = False
    jobs: int = Field(default=1, ge=1)


class ScoredCandidateOut(BaseModel):
    rank: int
    pool_index: int
    mu: float
    text: str
    input_format: Format
    beam_width: int
    generator_id: str
    stripped_markers: int


class RankedResultOut(BaseModel):
    doc_id: str
    selected: str
    mu: float
    metric: Metric
    used_fallback: bool
    candidates: list[ScoredCandidateOut]


class RankResponse(BaseModel):
    results: list[RankedResultOut]


class SelectionIn(BaseModel):
    doc_id: str
    selected: str


class EvalRequest(BaseModel):
    selections: list[SelectionIn]
    references: list[ReferenceIn]
    folds: Optional[list[FoldIn]] = None
    system_id: str = "system"
    stem: bool = False


class EvalResponse(BaseModel):
    report: dict
    table: str


class CompareRequest(BaseModel):
    report_a: dict
    report_b: dict
    trials: int = Field(default=10_000, ge=1000)
    seed: int = 0


class CompareResponse(BaseModel):
    result: dict


class StatsRequest(BaseModel):
    documents: list[DocumentIn]


class StatsResponse(BaseModel):
    documents: int
    mean_words: float
    max_words: int


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
