"""Sensitivity fusion, fair-coverage penalty, and the decision map.

Accumulated observations are combined as a convex sum, so regions confirmed
by several detectors outrank single-detector regions. A decaying Gaussian
penalty remembers recently shown regions and hands priority to the rest of
the scene; a binary user mask excludes regions that are never relevant.
"""

from __future__ import annotations

import numpy as np

from .errors import SzoomError
from .geometry import Rect, ScalarMap


class FusionWeights:
    """Per-kind convex coefficients, normalized to sum to 1 at construction."""

    def __init__(self, weights: dict[str, float]):
        if not weights:
            raise SzoomError("fusion needs at least one observation weight")
        for kind, c in weights.items():
            if c < 0:
                raise SzoomError(f"weight for {kind!r} must be >= 0, got {c}")
        total = sum(weights.values())
        if total <= 0:
            raise SzoomError("fusion weights must not all be zero")
        self._coeffs = {kind: c / total for kind, c in weights.items()}

    @classmethod
    def default(cls) -> "FusionWeights":
        return cls({"motion": 0.46, "human": 0.53, "face": 0.01})

    def coefficient(self, kind: str) -> float:
        try:
            return self._coeffs[kind]
        except KeyError:
            raise SzoomError(f"no fusion weight configured for kind {kind!r}") from None

    @property
    def kinds(self) -> list[str]:
        return sorted(self._coeffs)

    def as_dict(self) -> dict[str, float]:
        return dict(self._coeffs)


def fuse(observations: dict[str, ScalarMap], weights: FusionWeights) -> ScalarMap:
    """Per-pixel convex combination of accumulated observation maps."""
    if not observations:
        raise SzoomError("fuse requires at least one observation map")
    shape = None
    acc = None
    for kind in sorted(observations):
        m = observations[kind]
        c = weights.coefficient(kind)
        if shape is None:
            shape = m.shape
            acc = np.zeros(shape, dtype=np.float64)
        elif m.shape != shape:
            raise SzoomError(
                f"observation {kind!r} has shape {m.shape}, expected {shape}"
            )
        acc += c * m.values
    out = ScalarMap.__new__(ScalarMap)
    out.values = np.clip(acc, 0.0, 1.0)
    return out


class UserMask:
    """Binary relevance mask: 1 marks pixels worth watching."""

    def __init__(self, map: ScalarMap):
        vals = map.values
        if not np.all((vals == 0.0) | (vals == 1.0)):
            raise SzoomError("user mask must be strictly binary")
        self.map = map

    @classmethod
    def all_relevant(cls, width: int, height: int) -> "UserMask":
        return cls(ScalarMap.full(width, height, 1.0))


class PenaltyState:
    """Decaying sum of Gaussians over recently selected regions.

    The grid may live at a coarser analysis resolution than the frames;
    region coordinates are mapped onto it through ``frame_w``/``frame_h``.
    """

    def __init__(self, width: int, height: int, alpha: float = 0.3,
                 frame_w: int | None = None, frame_h: int | None = None):
        if not 0.0 <= alpha <= 1.0:
            raise SzoomError(f"penalty decay alpha must be in [0,1], got {alpha}")
        self.map = ScalarMap.zeros(width, height)
        self.alpha = alpha
        self.frame_w = frame_w if frame_w is not None else width
        self.frame_h = frame_h if frame_h is not None else height
        self.history: list[tuple[int, float, float, float, float]] = []
        self._cycle = 0

    def decay(self):
        """Age the map by one cycle without marking a new region."""
        self.map.values *= self.alpha
        self._cycle += 1


def _gaussian_grid(width: int, height: int, mu_x: float, mu_y: float,
                   sigma_x: float, sigma_y: float) -> np.ndarray:
    xs = np.arange(width, dtype=np.float64)
    ys = np.arange(height, dtype=np.float64)
    gx = np.exp(-((xs - mu_x) ** 2) / (2.0 * sigma_x**2))
    gy = np.exp(-((ys - mu_y) ** 2) / (2.0 * sigma_y**2))
    return gy[:, None] * gx[None, :]


def apply_penalty_cycle(state: PenaltyState, selected: Rect) -> PenaltyState:
    """Close a cycle: decay the map and stamp the just-shown region.

    ``selected`` is the tracked region at the last frame of the finished
    cycle, in frame coordinates. The stamped Gaussian peaks at 1 over the
    region center with sigmas of half its width and height.
    """
    sx = state.map.width / state.frame_w
    sy = state.map.height / state.frame_h
    cx, cy = selected.center
    mu_x, mu_y = cx * sx, cy * sy
    sigma_x = max(selected.w / 2.0 * sx, 0.5)
    sigma_y = max(selected.h / 2.0 * sy, 0.5)
    g = _gaussian_grid(state.map.width, state.map.height, mu_x, mu_y, sigma_x, sigma_y)
    state.map.values = np.clip(state.alpha * state.map.values + g, 0.0, 1.0)
    state.history.append((state._cycle, mu_x, mu_y, sigma_x, sigma_y))
    state._cycle += 1
    return state


def _resample_bilinear(values: np.ndarray, width: int, height: int) -> np.ndarray:
    src_h, src_w = values.shape
    xs = np.clip((np.arange(width) + 0.5) * (src_w / width) - 0.5, 0, src_w - 1)
    ys = np.clip((np.arange(height) + 0.5) * (src_h / height) - 0.5, 0, src_h - 1)
    x0 = np.floor(xs).astype(int)
    y0 = np.floor(ys).astype(int)
    x1 = np.minimum(x0 + 1, src_w - 1)
    y1 = np.minimum(y0 + 1, src_h - 1)
    fx = xs - x0
    fy = ys - y0
    top = values[y0][:, x0] * (1 - fx) + values[y0][:, x1] * fx
    bot = values[y1][:, x0] * (1 - fx) + values[y1][:, x1] * fx
    return top * (1 - fy[:, None]) + bot * fy[:, None]


def decision_map(sensitivity: ScalarMap, user: UserMask, penalty: PenaltyState) -> ScalarMap:
    """(1 - penalty) * (user * sensitivity), the map candidate regions come from."""
    if not sensitivity.same_shape(user.map):
        raise SzoomError(
            f"user mask {user.map.shape} does not match sensitivity {sensitivity.shape}"
        )
    p = penalty.map.values
    if penalty.map.shape != sensitivity.shape:
        p = _resample_bilinear(p, sensitivity.width, sensitivity.height)
    out = ScalarMap.__new__(ScalarMap)
    out.values = (1.0 - p) * (user.map.values * sensitivity.values)
    return out
