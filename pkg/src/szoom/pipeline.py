"""Cycle orchestration: analyze, select, track, zoom, penalize.

Every cycle of ``delta`` frames analyzes only its first ``omega`` frames to
pick a target region, then tracks that region while the virtual camera runs
the full-view / zoom-in / hold / zoom-out schedule. At the cycle boundary
the shown region is stamped into the penalty map so other regions win next.

Frame writing and trajectory logging run on a sink thread behind a bounded
queue; processing never waits on the disk unless the queue fills up.
"""

from __future__ import annotations

import json
import queue
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .config import PipelineConfig
from .detections import load_detection_stream
from .errors import ConfigError, InputError
from .frames_io import load_user_mask, open_frame_source, write_frame_png
from .fusion import (
    FusionWeights,
    PenaltyState,
    UserMask,
    apply_penalty_cycle,
    decision_map,
    fuse,
)
from .geometry import Frame, Rect, ScalarMap
from .observation import MOTION, Accumulator, DetectionRecord, MogModel, detect_motion, rasterize
from .roi import extract_candidates, select_target
from .tracking import init_tracker, track_step
from .trajectory import TrajectoryEntry
from .zoom import AbSchedule, ParamSmoother, Phase, ZoomParams, refine_target, render, schedule_params

DetectionIndex = dict[int, dict[str, list[DetectionRecord]]]


@dataclass
class CycleResult:
    rendered: list[Frame]
    entries: list[TrajectoryEntry]
    target: Rect | None


class StageTimer:
    def __init__(self):
        self.totals: dict[str, float] = {}
        self.counts: dict[str, int] = {}

    def add(self, stage: str, seconds: float):
        self.totals[stage] = self.totals.get(stage, 0.0) + seconds
        self.counts[stage] = self.counts.get(stage, 0) + 1

    def mean_ms(self) -> dict[str, float]:
        return {
            stage: round(1000.0 * self.totals[stage] / self.counts[stage], 3)
            for stage in sorted(self.totals)
        }


class Pipeline:
    """Holds all cross-cycle state for one input stream."""

    def __init__(
        self,
        config: PipelineConfig,
        frame_w: int,
        frame_h: int,
        fps: float,
        user_mask: ScalarMap | None = None,
        detections: DetectionIndex | None = None,
    ):
        config.validate()
        self.config = config
        self.frame_w = frame_w
        self.frame_h = frame_h
        self.fps = fps
        self.delta = max(round(config.delta_seconds * fps), 1)
        self.weights = config.fusion_weights()
        self.kinds = self.weights.kinds
        self.schedule = AbSchedule(self.delta, config.a_pct, config.b_pct)

        self.analysis_len = max(config.omega_for(k) for k in self.kinds)
        n_full = self.schedule.phase_lengths[0]
        if self.analysis_len > n_full:
            raise ConfigError(
                f"omega ({self.analysis_len}) must fit inside the initial full-view "
                f"phase ({n_full} frames at delta={self.delta}); lower omega or "
                "lengthen the cycle"
            )

        self.analysis_w = max(round(frame_w * config.motion_scale), 1)
        self.analysis_h = max(round(frame_h * config.motion_scale), 1)
        self.penalty = PenaltyState(
            self.analysis_w, self.analysis_h, config.alpha, frame_w, frame_h
        )
        self.mog = MogModel(
            n_components=config.mog_components,
            learning_rate=config.mog_learning_rate,
            variance_threshold=config.mog_variance_threshold,
            initial_variance=config.mog_initial_variance,
            background_ratio=config.mog_background_ratio,
        )
        self.user_mask = UserMask(
            user_mask if user_mask is not None else ScalarMap.full(frame_w, frame_h, 1.0)
        )
        self.detections: DetectionIndex = detections or {}
        self.min_area = (
            config.min_area
            if config.min_area is not None
            else 0.0005 * frame_w * frame_h
        )
        # merge distance is configured in analysis-grid pixels
        self.merge_dist = config.merge_dist / config.motion_scale
        self.out_aspect = config.out_w / config.out_h
        self.full_view = self._full_view_params()
        self.cycle = 0
        self.timer = StageTimer()

    def _full_view_params(self) -> ZoomParams:
        vw = float(self.frame_w)
        vh = vw / self.out_aspect
        if vh > self.frame_h:
            vh = float(self.frame_h)
            vw = vh * self.out_aspect
        return ZoomParams(cx=self.frame_w / 2.0, cy=self.frame_h / 2.0, vw=vw, vh=vh)

    def _observe(self, frame: Frame, kind: str) -> ScalarMap:
        if kind == MOTION:
            motion_map, _ = detect_motion(frame, self.mog, self.config.motion_scale)
            return motion_map
        records = self.detections.get(frame.index, {}).get(kind, [])
        return rasterize(
            records, self.frame_w, self.frame_h, self.config.min_confidence
        )

    def select_cycle_target(self, frames: list[Frame]) -> Rect | None:
        """Analyze the first omega frames of a cycle and pick the target."""
        accumulators = {k: Accumulator(self.config.omega_for(k)) for k in self.kinds}
        observed: dict[str, ScalarMap] = {}
        t0 = time.perf_counter()
        for frame in frames[: self.analysis_len]:
            for kind in self.kinds:
                observed[kind] = accumulators[kind].accumulate(
                    self._observe(frame, kind)
                )
        self.timer.add("analyze", time.perf_counter() - t0)

        t0 = time.perf_counter()
        sensitivity = fuse(observed, self.weights)
        decision = decision_map(sensitivity, self.user_mask, self.penalty)
        candidates = extract_candidates(
            decision, self.config.threshold, self.merge_dist, self.min_area
        )
        target = select_target(candidates, self.out_aspect, self.frame_w, self.frame_h)
        self.timer.add("select", time.perf_counter() - t0)
        return target

    def run_cycle(self, frames: list[Frame]) -> CycleResult:
        """Process one cycle; a shortened final chunk renders full view only."""
        cycle = self.cycle
        self.cycle += 1
        cfg = self.config

        if len(frames) < self.delta:
            rendered, entries = [], []
            for frame in frames:
                t0 = time.perf_counter()
                rendered.append(render(frame, self.full_view, cfg.out_w, cfg.out_h))
                self.timer.add("render", time.perf_counter() - t0)
                entries.append(
                    TrajectoryEntry(frame.index, cycle, Phase.FULL, self.full_view, None)
                )
            return CycleResult(rendered, entries, None)

        target = self.select_cycle_target(frames)

        tracker = None
        base_target = refined = None
        smoother = ParamSmoother(cfg.smoother_window)
        last_tracked = target
        if target is not None:
            tracker = init_tracker(frames[self.analysis_len - 1], target)
            base_target = refined = ZoomParams.from_rect(target)

        rendered, entries = [], []
        for i, frame in enumerate(frames):
            if tracker is not None and i >= self.analysis_len:
                t0 = time.perf_counter()
                last_tracked = track_step(tracker, frame)
                refined = refine_target(base_target, last_tracked, smoother)
                self.timer.add("track", time.perf_counter() - t0)
            if target is None:
                phase, params = Phase.FULL, self.full_view
            else:
                phase = self.schedule.phase_at(i)[0]
                params = schedule_params(self.schedule, i, self.full_view, refined)
            t0 = time.perf_counter()
            rendered.append(render(frame, params, cfg.out_w, cfg.out_h))
            self.timer.add("render", time.perf_counter() - t0)
            entries.append(TrajectoryEntry(frame.index, cycle, phase, params, target))

        if target is not None and last_tracked is not None:
            apply_penalty_cycle(self.penalty, last_tracked)
        else:
            self.penalty.decay()
        return CycleResult(rendered, entries, target)


def _chunks(frames: Iterable[Frame], size: int) -> Iterator[list[Frame]]:
    chunk: list[Frame] = []
    for frame in frames:
        chunk.append(frame)
        if len(chunk) == size:
            yield chunk
            chunk = []
    if chunk:
        yield chunk


class _Sink(threading.Thread):
    """Writes rendered frames and trajectory lines in arrival order."""

    def __init__(self, out_dir: Path | None, trajectory_path: Path | None, maxsize: int = 64):
        super().__init__(daemon=True)
        self.queue: queue.Queue = queue.Queue(maxsize=maxsize)
        self.out_dir = out_dir
        self.trajectory_path = trajectory_path
        self.error: BaseException | None = None
        self._log = None

    def run(self):
        try:
            if self.trajectory_path is not None:
                self._log = open(self.trajectory_path, "w", encoding="utf-8")
            while True:
                item = self.queue.get()
                if item is None:
                    break
                frame, entry = item
                if self.out_dir is not None:
                    write_frame_png(self.out_dir, frame)
                if self._log is not None:
                    self._log.write(entry.to_json() + "\n")
        except BaseException as e:  # surfaced by the producer after join
            self.error = e
        finally:
            if self._log is not None:
                self._log.close()

    def put(self, frame: Frame, entry: TrajectoryEntry):
        if self.error is not None:
            raise InputError(f"output sink failed: {self.error}")
        self.queue.put((frame, entry))

    def close(self):
        self.queue.put(None)
        self.join()
        if self.error is not None:
            raise InputError(f"output sink failed: {self.error}")


def run(
    config: PipelineConfig,
    input_path: str | Path,
    detections_path: str | Path | None = None,
    mask_path: str | Path | None = None,
    out_dir: str | Path | None = None,
    trajectory_path: str | Path | None = None,
) -> dict:
    """Process a whole stream cycle by cycle; returns the run summary."""
    config.validate()
    source = open_frame_source(input_path)
    fps = config.fps if config.fps is not None else (source.fps or 30.0)
    frame_w, frame_h = source.width, source.height

    detections = (
        load_detection_stream(detections_path, frame_w, frame_h)
        if detections_path
        else {}
    )
    analysis_w = max(round(frame_w * config.motion_scale), 1)
    analysis_h = max(round(frame_h * config.motion_scale), 1)
    mask = (
        load_user_mask(mask_path, frame_w, frame_h, analysis_w, analysis_h)
        if mask_path
        else None
    )

    pipeline = Pipeline(config, frame_w, frame_h, fps, mask, detections)

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    sink = _Sink(out_dir, Path(trajectory_path) if trajectory_path else None)
    sink.start()

    frames_done = 0
    targets_selected = 0
    cycles = 0
    try:
        for chunk in _chunks(source, pipeline.delta):
            result = pipeline.run_cycle(chunk)
            cycles += 1
            if result.target is not None:
                targets_selected += 1
            for frame, entry in zip(result.rendered, result.entries):
                sink.put(frame, entry)
                frames_done += 1
    finally:
        sink.close()

    summary = {
        "frames": frames_done,
        "cycles": cycles,
        "targets_selected": targets_selected,
        "fps": fps,
        "delta_frames": pipeline.delta,
        "frame_size": [frame_w, frame_h],
        "output_size": [config.out_w, config.out_h],
        "seed": config.seed,
        "mean_stage_ms": pipeline.timer.mean_ms(),
    }
    if out_dir is not None:
        (out_dir / "summary.json").write_text(
            json.dumps(summary, indent=2) + "\n", encoding="utf-8"
        )
    return summary


__all__ = ["CycleResult", "Pipeline", "run"]
