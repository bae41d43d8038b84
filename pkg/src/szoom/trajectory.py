"""Per-frame zoom trajectory log and the zoom-accuracy metric.

The trajectory is the primary observable of a run: one JSON line per output
frame recording the cycle, phase, view parameters, and the cycle's selected
target. Identical inputs and configuration must reproduce it byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import SzoomError
from .geometry import Rect
from .zoom import Phase, ZoomParams


@dataclass(frozen=True)
class TrajectoryEntry:
    frame: int
    cycle: int
    phase: Phase
    view: ZoomParams
    target: Rect | None

    def to_json(self) -> str:
        target = (
            None
            if self.target is None
            else {"x": self.target.x, "y": self.target.y, "w": self.target.w, "h": self.target.h}
        )
        return json.dumps(
            {
                "frame": self.frame,
                "cycle": self.cycle,
                "phase": self.phase.value,
                "cx": self.view.cx,
                "cy": self.view.cy,
                "vw": self.view.vw,
                "vh": self.view.vh,
                "target": target,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "TrajectoryEntry":
        obj = json.loads(line)
        target = obj.get("target")
        return cls(
            frame=int(obj["frame"]),
            cycle=int(obj["cycle"]),
            phase=Phase(obj["phase"]),
            view=ZoomParams(
                cx=float(obj["cx"]), cy=float(obj["cy"]),
                vw=float(obj["vw"]), vh=float(obj["vh"]),
            ),
            target=None
            if target is None
            else Rect(int(target["x"]), int(target["y"]), int(target["w"]), int(target["h"])),
        )


def write_trajectory(path: str | Path, entries: list[TrajectoryEntry]):
    with open(path, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(e.to_json() + "\n")


def read_trajectory(path: str | Path) -> list[TrajectoryEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                entries.append(TrajectoryEntry.from_json(line))
            except (KeyError, ValueError) as e:
                raise SzoomError(f"{path}:{lineno}: bad trajectory entry ({e})") from None
    return entries


def load_truth_boxes(path: str | Path) -> dict[int, Rect]:
    """Ground-truth object boxes at hold-phase end, one JSON line per cycle."""
    boxes: dict[int, Rect] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                cycle = int(obj["cycle"])
                boxes[cycle] = Rect(int(obj["x"]), int(obj["y"]), int(obj["w"]), int(obj["h"]))
            except (KeyError, ValueError, TypeError) as e:
                raise SzoomError(f"{path}:{lineno}: bad truth entry ({e})") from None
    return boxes


def zoom_accuracy(
    entries: list[TrajectoryEntry],
    truth: dict[int, Rect],
    frame_w: int,
    frame_h: int,
) -> tuple[float, int, int]:
    """Fraction of zoom cycles whose object is still inside the held view.

    A cycle counts as a zoom when it selected a target; it is correct when
    the ground-truth box at the end of the hold phase lies fully inside the
    view rect held at that moment. Returns (accuracy, correct, zooms); with
    no zooms at all the accuracy is vacuously 1.0.
    """
    hold_end: dict[int, TrajectoryEntry] = {}
    for e in entries:
        if e.target is not None and e.phase is Phase.HOLD:
            hold_end[e.cycle] = e
    correct = 0
    for cycle, entry in sorted(hold_end.items()):
        if cycle not in truth:
            raise SzoomError(f"no ground-truth box for zoom cycle {cycle}")
        view = entry.view.view_rect(frame_w, frame_h)
        if view.contains(truth[cycle]):
            correct += 1
    zooms = len(hold_end)
    if zooms == 0:
        return 1.0, 0, 0
    return correct / zooms, correct, zooms
