"""Foundational geometric and raster value types.

Everything here is a plain value: rectangles, scalar grids in [0, 1], and
8-bit color frames. All real-to-pixel conversions round half up so the rest
of the engine stays deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SzoomError


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves toward +infinity."""
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class Rect:
    """Axis-aligned pixel rectangle: left, top, width, height."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise SzoomError(f"rect must have positive size, got {self.w}x{self.h}")

    @property
    def x2(self) -> int:
        return self.x + self.w

    @property
    def y2(self) -> int:
        return self.y + self.h

    @property
    def area(self) -> int:
        return self.w * self.h

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def aspect(self) -> float:
        return self.w / self.h

    def contains(self, other: "Rect") -> bool:
        return (
            self.x <= other.x
            and self.y <= other.y
            and other.x2 <= self.x2
            and other.y2 <= self.y2
        )

    def intersect(self, other: "Rect") -> "Rect | None":
        x1 = max(self.x, other.x)
        y1 = max(self.y, other.y)
        x2 = min(self.x2, other.x2)
        y2 = min(self.y2, other.y2)
        if x2 <= x1 or y2 <= y1:
            return None
        return Rect(x1, y1, x2 - x1, y2 - y1)

    def gap_to(self, other: "Rect") -> float:
        """Euclidean distance between the closest boundary points (0 if overlapping)."""
        dx = max(0, max(self.x, other.x) - min(self.x2, other.x2))
        dy = max(0, max(self.y, other.y) - min(self.y2, other.y2))
        return math.hypot(dx, dy)

    def union_bbox(self, other: "Rect") -> "Rect":
        x1 = min(self.x, other.x)
        y1 = min(self.y, other.y)
        return Rect(x1, y1, max(self.x2, other.x2) - x1, max(self.y2, other.y2) - y1)


def iou(a: Rect, b: Rect) -> float:
    inter = a.intersect(b)
    if inter is None:
        return 0.0
    return inter.area / float(a.area + b.area - inter.area)


class ScalarMap:
    """2-D grid of values clamped into [0, 1].

    Carries sensitivity, accumulated observations, penalty, decision and user
    masks. Values are clamped (never rescaled) on construction so overlapping
    contributions cannot push a pixel outside the unit interval.
    """

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise SzoomError(f"scalar map must be 2-D, got shape {arr.shape}")
        self.values = np.clip(arr, 0.0, 1.0)

    @classmethod
    def zeros(cls, width: int, height: int) -> "ScalarMap":
        m = cls.__new__(cls)
        m.values = np.zeros((height, width), dtype=np.float64)
        return m

    @classmethod
    def full(cls, width: int, height: int, value: float) -> "ScalarMap":
        m = cls.__new__(cls)
        m.values = np.full((height, width), min(max(value, 0.0), 1.0), dtype=np.float64)
        return m

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def copy(self) -> "ScalarMap":
        m = ScalarMap.__new__(ScalarMap)
        m.values = self.values.copy()
        return m

    def binarize(self, threshold: float) -> "ScalarMap":
        m = ScalarMap.__new__(ScalarMap)
        m.values = (self.values >= threshold).astype(np.float64)
        return m

    def same_shape(self, other: "ScalarMap") -> bool:
        return self.values.shape == other.values.shape


@dataclass
class Frame:
    """One 8-bit RGB video frame with its position in the stream."""

    pixels: np.ndarray
    index: int

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise SzoomError(
                f"frame pixels must be uint8 HxWx3, got {px.dtype} {px.shape}"
            )
        self.pixels = px

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def clamp_rect(r: Rect, frame_w: int, frame_h: int) -> Rect:
    """Fit a rect inside the frame: translate first, shrink only if oversized."""
    w = min(r.w, frame_w)
    h = min(r.h, frame_h)
    x = min(max(r.x, 0), frame_w - w)
    y = min(max(r.y, 0), frame_h - h)
    if (x, y, w, h) == (r.x, r.y, r.w, r.h):
        return r
    return Rect(x, y, w, h)


def _spread(lo: int, size: int, ideal_lo: float, limit: int) -> int:
    """Pick a start coordinate near ideal_lo, inside [0, limit - size]."""
    pos = round_half_up(ideal_lo)
    pos = min(max(pos, 0), max(limit - size, 0))
    return pos


def adjust_aspect(r: Rect, target_aspect: float, frame_w: int, frame_h: int) -> Rect:
    """Grow a rect symmetrically until its aspect ratio matches target_aspect.

    Width grows when the rect is too tall, height when too wide; growth spills
    to the opposite side when a frame edge is hit. If the grown rect cannot
    fit the frame at all, it is shrunk while keeping the target aspect.
    """
    if target_aspect <= 0:
        raise SzoomError("target aspect ratio must be positive")

    want_w = round_half_up(r.h * target_aspect)
    if want_w >= r.w:
        new_w, new_h = max(want_w, 1), r.h
    else:
        # grow height until the width derived from it covers the rect, so the
        # rounding error stays in the numerator (within 0.5/h of the target)
        new_h = max(r.h, int((r.w - 0.5) / target_aspect))
        while round_half_up(new_h * target_aspect) < r.w:
            new_h += 1
        new_w = round_half_up(new_h * target_aspect)

    if new_w <= frame_w and new_h <= frame_h:
        cx, cy = r.center
        x = _spread(r.x, new_w, cx - new_w / 2.0, frame_w)
        y = _spread(r.y, new_h, cy - new_h / 2.0, frame_h)
        # keep the input covered whenever the frame leaves room for it
        x = min(max(x, r.x2 - new_w), r.x)
        y = min(max(y, r.y2 - new_h), r.y)
        return clamp_rect(Rect(x, y, new_w, new_h), frame_w, frame_h)

    # target-aspect rect larger than the frame: largest aspect-true fit
    fit_h = min(frame_h, int(frame_w / target_aspect))
    fit_h = max(fit_h, 1)
    fit_w = round_half_up(fit_h * target_aspect)
    while fit_w > frame_w and fit_h > 1:
        fit_h -= 1
        fit_w = round_half_up(fit_h * target_aspect)
    fit_w = min(max(fit_w, 1), frame_w)
    cx, cy = r.center
    x = _spread(0, fit_w, cx - fit_w / 2.0, frame_w)
    y = _spread(0, fit_h, cy - fit_h / 2.0, frame_h)
    return Rect(x, y, fit_w, fit_h)


def scale_rect(r: Rect, factor: float) -> Rect:
    """Scale all four fields by factor, rounding half up; size floors at 1 px."""
    if factor <= 0:
        raise SzoomError("scale factor must be positive")
    return Rect(
        round_half_up(r.x * factor),
        round_half_up(r.y * factor),
        max(round_half_up(r.w * factor), 1),
        max(round_half_up(r.h * factor), 1),
    )
