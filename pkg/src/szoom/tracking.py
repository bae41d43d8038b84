"""Size-invariant mean-shift tracking of the selected region.

The tracker follows a kernel-weighted RGB color histogram: each step
back-projects the target histogram onto the current window and moves to the
weighted centroid until the shift stalls. Window size stays fixed for the
whole cycle; only the center moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SzoomError
from .geometry import Frame, Rect, clamp_rect, round_half_up

BINS_PER_CHANNEL = 16
_SHIFT = 8 - 4  # uint8 value -> 4-bit bin index


def _bin_indices(patch: np.ndarray) -> np.ndarray:
    q = (patch >> _SHIFT).astype(np.int32)
    return (q[:, :, 0] << 8) | (q[:, :, 1] << 4) | q[:, :, 2]


def _kernel(h: int, w: int, kind: str) -> np.ndarray:
    """Spatial weighting over a window; Epanechnikov profile or flat."""
    if kind == "uniform":
        return np.ones((h, w), dtype=np.float64)
    ys = (np.arange(h) - (h - 1) / 2.0) / (h / 2.0)
    xs = (np.arange(w) - (w - 1) / 2.0) / (w / 2.0)
    r2 = ys[:, None] ** 2 + xs[None, :] ** 2
    return np.maximum(1.0 - r2, 0.0)


def color_histogram(patch: np.ndarray, kernel: str = "epanechnikov") -> np.ndarray:
    """Normalized joint RGB histogram (16 bins per channel), kernel-weighted."""
    k = _kernel(patch.shape[0], patch.shape[1], kernel)
    hist = np.bincount(
        _bin_indices(patch).ravel(),
        weights=k.ravel(),
        minlength=BINS_PER_CHANNEL**3,
    )
    total = hist.sum()
    if total <= 0:
        raise SzoomError("cannot build a histogram from an empty-support window")
    return hist / total


@dataclass
class TrackerState:
    target_histogram: np.ndarray = field(repr=False)
    rect: Rect
    frame_w: int
    frame_h: int
    max_iterations: int = 20
    epsilon: float = 1.0
    kernel: str = "epanechnikov"


def init_tracker(
    frame: Frame,
    rect: Rect,
    max_iterations: int = 20,
    epsilon: float = 1.0,
    kernel: str = "epanechnikov",
) -> TrackerState:
    if rect.w < 2 or rect.h < 2:
        raise SzoomError(f"tracked rect must be at least 2x2, got {rect.w}x{rect.h}")
    r = clamp_rect(rect, frame.width, frame.height)
    if r.w != rect.w or r.h != rect.h:
        raise SzoomError(f"rect {rect} does not fit inside the frame")
    patch = frame.pixels[r.y : r.y2, r.x : r.x2]
    return TrackerState(
        target_histogram=color_histogram(patch, kernel),
        rect=r,
        frame_w=frame.width,
        frame_h=frame.height,
        max_iterations=max_iterations,
        epsilon=epsilon,
        kernel=kernel,
    )


def track_step(state: TrackerState, frame: Frame) -> Rect:
    """Relocate the window on a new frame; size stays fixed, center moves.

    If the target appearance vanished from the window, the centroid weights
    collapse and the rect simply stays put.
    """
    if frame.width != state.frame_w or frame.height != state.frame_h:
        raise SzoomError(
            f"frame size {frame.width}x{frame.height} does not match tracker "
            f"init {state.frame_w}x{state.frame_h}"
        )
    w, h = state.rect.w, state.rect.h
    q = state.target_histogram
    support = _kernel(h, w, state.kernel) > 0.0
    cx = state.rect.x + (w - 1) / 2.0
    cy = state.rect.y + (h - 1) / 2.0

    for _ in range(state.max_iterations):
        ix = min(max(round_half_up(cx - (w - 1) / 2.0), 0), state.frame_w - w)
        iy = min(max(round_half_up(cy - (h - 1) / 2.0), 0), state.frame_h - h)
        patch = frame.pixels[iy : iy + h, ix : ix + w]
        idx = _bin_indices(patch)
        p = color_histogram(patch, state.kernel)

        ratio = np.sqrt(np.divide(q, p, out=np.zeros_like(q), where=p > 0))
        weights = ratio[idx]
        weights[~support] = 0.0
        total = weights.sum()
        if total <= 1e-12:
            break
        xs = ix + np.arange(w, dtype=np.float64)
        ys = iy + np.arange(h, dtype=np.float64)
        new_cx = float((weights * xs[None, :]).sum() / total)
        new_cy = float((weights * ys[:, None]).sum() / total)
        shift = np.hypot(new_cx - (ix + (w - 1) / 2.0), new_cy - (iy + (h - 1) / 2.0))
        cx, cy = new_cx, new_cy
        if shift < state.epsilon:
            break

    new_rect = clamp_rect(
        Rect(
            round_half_up(cx - (w - 1) / 2.0),
            round_half_up(cy - (h - 1) / 2.0),
            w,
            h,
        ),
        state.frame_w,
        state.frame_h,
    )
    state.rect = new_rect
    return new_rect
