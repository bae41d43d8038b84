"""Zoom parameter scheduling and output rendering.

A cycle runs four phases: full view, zoom in, hold on the target, zoom out.
The zoomed phases interpolate each camera parameter with a cubic Hermite
blend whose endpoint tangents are zero, so pan and zoom speed ease in and
out instead of jumping.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from statistics import median

import numpy as np

from .errors import SzoomError
from .geometry import Frame, Rect, clamp_rect, round_half_up


class Phase(str, enum.Enum):
    FULL = "full"
    ZOOM_IN = "zoom_in"
    HOLD = "hold"
    ZOOM_OUT = "zoom_out"


@dataclass(frozen=True)
class ZoomParams:
    """Virtual camera state: view center and view size, in source pixels."""

    cx: float
    cy: float
    vw: float
    vh: float

    def __post_init__(self):
        if self.vw <= 0 or self.vh <= 0:
            raise SzoomError(f"view size must be positive, got {self.vw}x{self.vh}")

    @classmethod
    def from_rect(cls, r: Rect) -> "ZoomParams":
        cx, cy = r.center
        return cls(cx=cx, cy=cy, vw=float(r.w), vh=float(r.h))

    def view_rect(self, frame_w: int, frame_h: int) -> Rect:
        r = Rect(
            round_half_up(self.cx - self.vw / 2.0),
            round_half_up(self.cy - self.vh / 2.0),
            max(round_half_up(self.vw), 1),
            max(round_half_up(self.vh), 1),
        )
        return clamp_rect(r, frame_w, frame_h)


def hermite(a0: float, a1: float, f: float) -> float:
    """Cubic blend from a0 to a1 with zero end tangents, f in [0, 1]."""
    if not 0.0 <= f <= 1.0:
        raise SzoomError(f"interpolation fraction must be in [0,1], got {f}")
    f2 = f * f
    f3 = f2 * f
    return a0 * (2.0 * f3 - 3.0 * f2 + 1.0) + a1 * (-2.0 * f3 + 3.0 * f2)


def _blend(a: ZoomParams, b: ZoomParams, f: float) -> ZoomParams:
    return ZoomParams(
        cx=hermite(a.cx, b.cx, f),
        cy=hermite(a.cy, b.cy, f),
        vw=hermite(a.vw, b.vw, f),
        vh=hermite(a.vh, b.vh, f),
    )


class AbSchedule:
    """Phase layout of one cycle: A% full view, B% zoom in, A% hold, rest out."""

    def __init__(self, cycle_len: int, a_pct: float = 20.0, b_pct: float = 30.0):
        if cycle_len < 1:
            raise SzoomError(f"cycle length must be >= 1, got {cycle_len}")
        if a_pct <= 0 or b_pct <= 0 or 2 * a_pct + b_pct >= 100:
            raise SzoomError(
                f"phase percentages A={a_pct} B={b_pct} must be positive with 2A+B < 100"
            )
        self.cycle_len = cycle_len
        self.a_pct = a_pct
        self.b_pct = b_pct
        n_full = int(cycle_len * a_pct / 100.0)
        n_in = int(cycle_len * b_pct / 100.0)
        n_hold = int(cycle_len * a_pct / 100.0)
        n_out = cycle_len - n_full - n_in - n_hold
        self.phase_lengths = (n_full, n_in, n_hold, n_out)

    def phase_at(self, frame_in_cycle: int) -> tuple[Phase, float]:
        """Phase of a frame and its interpolation fraction within that phase."""
        if not 0 <= frame_in_cycle < self.cycle_len:
            raise SzoomError(
                f"frame {frame_in_cycle} outside cycle of {self.cycle_len} frames"
            )
        n_full, n_in, n_hold, n_out = self.phase_lengths
        i = frame_in_cycle
        if i < n_full:
            return Phase.FULL, 0.0
        i -= n_full
        if i < n_in:
            return Phase.ZOOM_IN, i / (n_in - 1) if n_in > 1 else 1.0
        i -= n_in
        if i < n_hold:
            return Phase.HOLD, 1.0
        i -= n_hold
        return Phase.ZOOM_OUT, i / (n_out - 1) if n_out > 1 else 1.0


def schedule_params(
    sched: AbSchedule,
    frame_in_cycle: int,
    full_view: ZoomParams,
    target: ZoomParams,
) -> ZoomParams:
    """View parameters for one frame of the cycle, each field blended alone."""
    phase, f = sched.phase_at(frame_in_cycle)
    if phase is Phase.FULL:
        return full_view
    if phase is Phase.ZOOM_IN:
        return _blend(full_view, target, f)
    if phase is Phase.HOLD:
        return target
    return _blend(target, full_view, f)


class ParamSmoother:
    """Per-field running median over the last N zoom parameter sets."""

    def __init__(self, window: int = 5):
        if window < 1:
            raise SzoomError(f"smoother window must be >= 1, got {window}")
        self.window = window
        self._hist: deque[ZoomParams] = deque(maxlen=window)

    def push(self, params: ZoomParams) -> ZoomParams:
        self._hist.append(params)
        return ZoomParams(
            cx=median(p.cx for p in self._hist),
            cy=median(p.cy for p in self._hist),
            vw=median(p.vw for p in self._hist),
            vh=median(p.vh for p in self._hist),
        )


def refine_target(
    current_target: ZoomParams, tracked_rect: Rect, smoother: ParamSmoother
) -> ZoomParams:
    """Move the zoom destination onto the tracked position, median-smoothed.

    The destination keeps the aspect-corrected target size; raw tracker
    centers would make the zoom jerky, so the smoother filters the stream.
    """
    cx, cy = tracked_rect.center
    return smoother.push(
        ZoomParams(cx=cx, cy=cy, vw=current_target.vw, vh=current_target.vh)
    )


def bilinear_resize(pixels: np.ndarray, out_w: int, out_h: int) -> np.ndarray:
    """Bilinear resampling with pixel-center alignment; uint8 in, uint8 out."""
    h, w = pixels.shape[:2]
    if (w, h) == (out_w, out_h):
        return pixels.copy()
    xs = np.clip((np.arange(out_w) + 0.5) * (w / out_w) - 0.5, 0.0, w - 1.0)
    ys = np.clip((np.arange(out_h) + 0.5) * (h / out_h) - 0.5, 0.0, h - 1.0)
    x0 = np.floor(xs).astype(int)
    y0 = np.floor(ys).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (xs - x0)[None, :, None]
    fy = (ys - y0)[:, None, None]
    src = pixels.astype(np.float64)
    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bot = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    out = top * (1 - fy) + bot * fy
    return np.floor(out + 0.5).clip(0, 255).astype(np.uint8)


def render(frame: Frame, params: ZoomParams, out_w: int, out_h: int) -> Frame:
    """Crop the clamped view rect and resample it to the output size."""
    if out_w < 1 or out_h < 1:
        raise SzoomError(f"output size must be positive, got {out_w}x{out_h}")
    view = params.view_rect(frame.width, frame.height)
    crop = frame.pixels[view.y : view.y2, view.x : view.x2]
    return Frame(pixels=bilinear_resize(crop, out_w, out_h), index=frame.index)
