"""Candidate region extraction from the decision map and target selection."""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

from .errors import SzoomError
from .geometry import Rect, ScalarMap, adjust_aspect, clamp_rect


@dataclass(frozen=True)
class CandidateRoi:
    rect: Rect
    score: float


def _component_boxes(binary: np.ndarray) -> list[Rect]:
    mask = binary.astype(np.uint8)
    contours, _ = cv2.findContours(mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
    return [Rect(*cv2.boundingRect(c)) for c in contours]


def merge_nearby(boxes: list[Rect], merge_dist: float) -> list[Rect]:
    """Merge boxes closer than merge_dist into joint bounding boxes, to fixpoint.

    Merging only grows boxes, which only shrinks gaps, so the fixpoint does
    not depend on merge order.
    """
    boxes = sorted(boxes, key=lambda r: (r.y, r.x, r.w, r.h))
    merged = True
    while merged:
        merged = False
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if boxes[i].gap_to(boxes[j]) < merge_dist:
                    joined = boxes[i].union_bbox(boxes[j])
                    boxes = [b for k, b in enumerate(boxes) if k not in (i, j)]
                    boxes.append(joined)
                    boxes.sort(key=lambda r: (r.y, r.x, r.w, r.h))
                    merged = True
                    break
            if merged:
                break
    return boxes


def extract_candidates(
    decision: ScalarMap,
    threshold: float = 0.2,
    merge_dist: float = 16.0,
    min_area: float = 0.0,
) -> list[CandidateRoi]:
    """Threshold the decision map and rank the surviving regions.

    Regions are connected-component bounding boxes, merged while their
    boundary gap is under ``merge_dist`` and dropped when smaller than
    ``min_area``. Scores sum the *original* decision values over each box;
    ties break toward larger area, then raster order.
    """
    if not 0.0 < threshold < 1.0:
        raise SzoomError(f"threshold must be in (0,1), got {threshold}")
    binary = decision.values >= threshold
    if not binary.any():
        return []
    boxes = merge_nearby(_component_boxes(binary), merge_dist)
    vals = decision.values
    candidates = [
        CandidateRoi(rect=b, score=float(vals[b.y : b.y2, b.x : b.x2].sum()))
        for b in boxes
        if b.area >= min_area
    ]
    candidates.sort(key=lambda c: (-c.score, -c.rect.area, c.rect.y, c.rect.x))
    return candidates


def select_target(
    candidates: list[CandidateRoi],
    target_aspect: float,
    frame_w: int,
    frame_h: int,
) -> Rect | None:
    """Best-scoring candidate as an aspect-corrected, frame-clamped rect."""
    if not candidates:
        return None
    best = candidates[0].rect
    return clamp_rect(
        adjust_aspect(best, target_aspect, frame_w, frame_h), frame_w, frame_h
    )
