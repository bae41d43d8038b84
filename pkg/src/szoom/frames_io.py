"""Frame sources and sinks.

Two input forms: a directory of numbered image files, or a single raw
planar stream. The raw format keeps the engine codec-free:

    SZRAW1 <width> <height> <fps>\n
    then per frame: R plane, G plane, B plane, each width*height bytes.

Output frames are numbered PNG files.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterator

import numpy as np
from PIL import Image

from .errors import InputError
from .geometry import Frame, ScalarMap

_IMAGE_SUFFIXES = (".png", ".ppm", ".pgm", ".bmp", ".jpg", ".jpeg")
_RAW_MAGIC = b"SZRAW1"


def _numeric_key(path: Path):
    digits = re.findall(r"\d+", path.stem)
    return (int(digits[-1]) if digits else -1, path.name)


class FrameSource:
    """Iterates frames with strictly increasing indices."""

    width: int
    height: int
    fps: float | None

    def __iter__(self) -> Iterator[Frame]:
        raise NotImplementedError


class ImageDirSource(FrameSource):
    def __init__(self, directory: str | Path):
        directory = Path(directory)
        if not directory.is_dir():
            raise InputError(f"input directory not found: {directory}")
        self.paths = sorted(
            (p for p in directory.iterdir() if p.suffix.lower() in _IMAGE_SUFFIXES),
            key=_numeric_key,
        )
        if not self.paths:
            raise InputError(f"no image files in {directory}")
        first = _read_image(self.paths[0])
        self.height, self.width = first.shape[:2]
        self.fps = None
        self._first = first

    def __iter__(self) -> Iterator[Frame]:
        for i, path in enumerate(self.paths):
            px = self._first if i == 0 else _read_image(path)
            if px.shape[:2] != (self.height, self.width):
                raise InputError(
                    f"{path}: frame size {px.shape[1]}x{px.shape[0]} differs from "
                    f"first frame {self.width}x{self.height}"
                )
            yield Frame(pixels=px, index=i)


class RawStreamSource(FrameSource):
    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            with open(self.path, "rb") as fh:
                header = fh.readline()
        except OSError as e:
            raise InputError(f"cannot read {path}: {e}") from None
        parts = header.split()
        if len(parts) != 4 or parts[0] != _RAW_MAGIC:
            raise InputError(f"{path}: not a SZRAW1 stream")
        try:
            self.width, self.height = int(parts[1]), int(parts[2])
            self.fps = float(parts[3])
        except ValueError:
            raise InputError(f"{path}: malformed SZRAW1 header") from None
        if self.width < 1 or self.height < 1 or self.fps <= 0:
            raise InputError(f"{path}: malformed SZRAW1 header")
        self._header_len = len(header)

    def __iter__(self) -> Iterator[Frame]:
        plane = self.width * self.height
        with open(self.path, "rb") as fh:
            fh.seek(self._header_len)
            index = 0
            while True:
                buf = fh.read(3 * plane)
                if not buf:
                    return
                if len(buf) < 3 * plane:
                    raise InputError(f"{self.path}: truncated frame {index}")
                planes = np.frombuffer(buf, dtype=np.uint8).reshape(
                    3, self.height, self.width
                )
                yield Frame(pixels=np.ascontiguousarray(planes.transpose(1, 2, 0)), index=index)
                index += 1


def write_raw_stream(path: str | Path, frames: list[np.ndarray], fps: float = 30.0):
    if not frames:
        raise InputError("cannot write an empty raw stream")
    h, w = frames[0].shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"SZRAW1 %d %d %g\n" % (w, h, fps))
        for px in frames:
            fh.write(np.ascontiguousarray(px.transpose(2, 0, 1)).tobytes())


def open_frame_source(path: str | Path) -> FrameSource:
    p = Path(path)
    if p.is_dir():
        return ImageDirSource(p)
    if p.is_file():
        return RawStreamSource(p)
    raise InputError(f"input not found: {p}")


def _read_image(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except OSError as e:
        raise InputError(f"cannot read image {path}: {e}") from None


def load_user_mask(path: str | Path, frame_w: int, frame_h: int,
                   analysis_w: int | None = None, analysis_h: int | None = None) -> ScalarMap:
    """Load a grayscale mask (nonzero = relevant) sized to the frame.

    The file must match the frame size or the analysis grid; an
    analysis-sized mask is upsampled with nearest neighbor.
    """
    path = Path(path)
    try:
        with Image.open(path) as img:
            gray = np.asarray(img.convert("L"))
    except OSError as e:
        raise InputError(f"cannot read mask {path}: {e}") from None
    mh, mw = gray.shape
    allowed = {(frame_w, frame_h)}
    if analysis_w and analysis_h:
        allowed.add((analysis_w, analysis_h))
    if (mw, mh) not in allowed:
        raise InputError(
            f"mask {path} is {mw}x{mh}; expected the frame size {frame_w}x{frame_h}"
            + (f" or the analysis grid {analysis_w}x{analysis_h}" if analysis_w else "")
        )
    binary = (gray > 0).astype(np.float64)
    if (mw, mh) != (frame_w, frame_h):
        ys = (np.arange(frame_h) * (mh / frame_h)).astype(int).clip(0, mh - 1)
        xs = (np.arange(frame_w) * (mw / frame_w)).astype(int).clip(0, mw - 1)
        binary = binary[ys][:, xs]
    m = ScalarMap.__new__(ScalarMap)
    m.values = binary
    return m


def write_frame_png(directory: str | Path, frame: Frame):
    Image.fromarray(frame.pixels, mode="RGB").save(
        Path(directory) / f"frame_{frame.index:06d}.png"
    )
