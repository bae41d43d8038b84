"""Detection stream ingest: JSON Lines, one record per line, frame-sorted.

Schema per line:
    {"frame": int, "kind": str, "x": int, "y": int, "w": int, "h": int,
     "confidence": float}

Frames may repeat (several records per frame) but must never decrease.
Rectangles are clamped to the declared frame size at ingest.
"""

from __future__ import annotations

import json
from collections import defaultdict
from pathlib import Path

from .errors import DetectionStreamError
from .geometry import Rect, clamp_rect
from .observation import DetectionRecord

_REQUIRED = ("frame", "kind", "x", "y", "w", "h", "confidence")


def parse_line(path: str, lineno: int, line: str, frame_w: int, frame_h: int) -> DetectionRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise DetectionStreamError(path, lineno, f"invalid JSON ({e.msg})") from None
    if not isinstance(obj, dict):
        raise DetectionStreamError(path, lineno, "record must be a JSON object")
    for key in _REQUIRED:
        if key not in obj:
            raise DetectionStreamError(path, lineno, f"missing field {key!r}")
    try:
        frame = int(obj["frame"])
        kind = str(obj["kind"])
        x, y, w, h = (int(obj[k]) for k in ("x", "y", "w", "h"))
        confidence = float(obj["confidence"])
    except (TypeError, ValueError) as e:
        raise DetectionStreamError(path, lineno, f"bad field value ({e})") from None
    if frame < 0:
        raise DetectionStreamError(path, lineno, f"frame index must be >= 0, got {frame}")
    if w < 1 or h < 1:
        raise DetectionStreamError(path, lineno, f"rect size must be positive, got {w}x{h}")
    if not 0.0 <= confidence <= 1.0:
        raise DetectionStreamError(
            path, lineno, f"confidence must be in [0,1], got {confidence}"
        )
    rect = clamp_rect(Rect(x, y, min(w, frame_w), min(h, frame_h)), frame_w, frame_h)
    return DetectionRecord(frame=frame, kind=kind, rect=rect, confidence=confidence)


def load_detection_stream(
    path: str | Path, frame_w: int, frame_h: int
) -> dict[int, dict[str, list[DetectionRecord]]]:
    """Load and validate a stream, grouped as frame -> kind -> records."""
    path = Path(path)
    grouped: dict[int, dict[str, list[DetectionRecord]]] = defaultdict(
        lambda: defaultdict(list)
    )
    last_frame = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            rec = parse_line(str(path), lineno, line, frame_w, frame_h)
            if rec.frame < last_frame:
                raise DetectionStreamError(
                    str(path),
                    lineno,
                    f"records out of order: frame {rec.frame} after {last_frame}",
                )
            last_frame = rec.frame
            grouped[rec.frame][rec.kind].append(rec)
    return {f: dict(kinds) for f, kinds in grouped.items()}


def write_detection_stream(path: str | Path, records: list[DetectionRecord]):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in sorted(records, key=lambda r: r.frame):
            fh.write(
                json.dumps(
                    {
                        "frame": rec.frame,
                        "kind": rec.kind,
                        "x": rec.rect.x,
                        "y": rec.rect.y,
                        "w": rec.rect.w,
                        "h": rec.rect.h,
                        "confidence": rec.confidence,
                    }
                )
                + "\n"
            )
