"""HTTP facade over the engine. Paths in requests are server-local."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..config import PipelineConfig, load_config
from ..errors import SzoomError
from ..frames_io import ImageDirSource
from ..observation import evaluate_prf
from ..pipeline import run as run_pipeline
from ..trajectory import load_truth_boxes, read_trajectory, zoom_accuracy
from .models import (
    AccuracyRequest,
    AccuracyResponse,
    HealthResponse,
    PrfRequest,
    PrfResponse,
    RunRequest,
    RunSummary,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="szoom",
        version=__version__,
        description="Automatic zoom into high-resolution surveillance video",
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.get("/config/defaults")
    def config_defaults() -> dict:
        cfg = PipelineConfig()
        return {
            "omega": cfg.omega,
            "delta_seconds": cfg.delta_seconds,
            "alpha": cfg.alpha,
            "weights": cfg.weights,
            "threshold": cfg.threshold,
            "merge_dist": cfg.merge_dist,
            "motion_scale": cfg.motion_scale,
            "human_scale": cfg.human_scale,
            "out_w": cfg.out_w,
            "out_h": cfg.out_h,
            "a_pct": cfg.a_pct,
            "b_pct": cfg.b_pct,
        }

    @app.post("/run", response_model=RunSummary)
    def run(req: RunRequest) -> RunSummary:
        try:
            cfg = load_config(req.config) if req.config else PipelineConfig()
            if req.seed is not None:
                cfg.seed = req.seed
            summary = run_pipeline(
                cfg,
                input_path=req.input,
                detections_path=req.detections,
                mask_path=req.mask,
                out_dir=req.out,
                trajectory_path=req.trajectory,
            )
        except SzoomError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return RunSummary(**summary)

    @app.post("/eval/prf", response_model=PrfResponse)
    def eval_prf(req: PrfRequest) -> PrfResponse:
        try:
            pred_dir = ImageDirSource(req.pred)
            truth_dir = ImageDirSource(req.truth)
            if len(pred_dir.paths) != len(truth_dir.paths):
                raise SzoomError(
                    f"prediction ({len(pred_dir.paths)}) and truth "
                    f"({len(truth_dir.paths)}) frame counts differ"
                )
            totals = [0.0, 0.0, 0.0]
            n = 0
            for pred, truth in zip(pred_dir, truth_dir):
                p, r, f1 = evaluate_prf(_frame_mask(pred), _frame_mask(truth))
                totals[0] += p
                totals[1] += r
                totals[2] += f1
                n += 1
            return PrfResponse(
                precision=totals[0] / n, recall=totals[1] / n, f1=totals[2] / n, frames=n
            )
        except SzoomError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None

    @app.post("/eval/accuracy", response_model=AccuracyResponse)
    def eval_accuracy(req: AccuracyRequest) -> AccuracyResponse:
        try:
            entries = read_trajectory(req.trajectory)
            truth = load_truth_boxes(req.truth)
            accuracy, correct, zooms = zoom_accuracy(
                entries, truth, req.frame_w, req.frame_h
            )
        except (SzoomError, OSError) as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return AccuracyResponse(accuracy=accuracy, correct=correct, zooms=zooms)

    return app


def _frame_mask(frame):
    from ..geometry import ScalarMap

    m = ScalarMap.__new__(ScalarMap)
    m.values = (frame.pixels.sum(axis=2) > 0).astype(float)
    return m
