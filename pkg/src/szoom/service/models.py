"""Request/response models of the engine service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    input: str = Field(description="Frame directory or SZRAW1 stream path")
    out: str | None = Field(default=None, description="Directory for rendered frames")
    trajectory: str | None = Field(default=None, description="Trajectory JSONL path")
    detections: str | None = Field(default=None, description="Detection stream JSONL path")
    mask: str | None = Field(default=None, description="User relevance mask image path")
    config: str | None = Field(default=None, description="key = value config file path")
    seed: int | None = Field(default=None, description="Overrides the config seed")


class RunSummary(BaseModel):
    frames: int
    cycles: int
    targets_selected: int
    fps: float
    delta_frames: int
    frame_size: tuple[int, int]
    output_size: tuple[int, int]
    seed: int
    mean_stage_ms: dict[str, float]


class PrfRequest(BaseModel):
    pred: str = Field(description="Directory of predicted binary masks")
    truth: str = Field(description="Directory of ground-truth binary masks")


class PrfResponse(BaseModel):
    precision: float
    recall: float
    f1: float
    frames: int


class AccuracyRequest(BaseModel):
    trajectory: str = Field(description="Trajectory JSONL path")
    truth: str = Field(description="Per-cycle ground-truth boxes, JSONL")
    frame_w: int = Field(gt=0, description="Input frame width the trajectory refers to")
    frame_h: int = Field(gt=0, description="Input frame height")


class AccuracyResponse(BaseModel):
    accuracy: float
    correct: int
    zooms: int


class HealthResponse(BaseModel):
    status: str
    version: str
