"""Shared synthetic-scene builders for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from szoom.geometry import Frame, Rect, ScalarMap


def solid_frame(w: int, h: int, color=(90, 90, 90), index: int = 0) -> Frame:
    px = np.empty((h, w, 3), dtype=np.uint8)
    px[:] = color
    return Frame(pixels=px, index=index)


def frame_with_blob(w, h, blob: Rect, blob_color=(200, 40, 40),
                    bg_color=(90, 90, 90), index=0) -> Frame:
    f = solid_frame(w, h, bg_color, index)
    f.pixels[blob.y : blob.y2, blob.x : blob.x2] = blob_color
    return f


def map_with_blocks(w, h, blocks: list[tuple[Rect, float]]) -> ScalarMap:
    vals = np.zeros((h, w), dtype=np.float64)
    for rect, value in blocks:
        vals[rect.y : rect.y2, rect.x : rect.x2] = value
    return ScalarMap(vals)


def moving_blob_frames(w, h, blob_w, blob_h, start_x, start_y, dx, dy, n,
                       blob_color=(200, 40, 40), bg_color=(90, 90, 90)):
    """Frames of a rigid blob translating (dx, dy) px per frame."""
    frames = []
    for i in range(n):
        x = start_x + dx * i
        y = start_y + dy * i
        frames.append(
            frame_with_blob(w, h, Rect(x, y, blob_w, blob_h), blob_color, bg_color, i)
        )
    return frames


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
