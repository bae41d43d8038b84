"""Per-frame semantic observations and their temporal accumulation.

Each observation kind (motion, human, face, ...) produces a binary map per
frame. Binary maps are averaged over a sliding window of ``omega`` frames so
that persistent detections survive and sporadic false hits wash out.

Motion is the one observation computed natively, with a per-pixel mixture of
Gaussians background model on a downscaled copy of the frame. Other kinds are
rasterized from externally supplied detection rectangles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import cv2
import numpy as np

from .errors import SzoomError
from .geometry import Frame, Rect, ScalarMap, clamp_rect, scale_rect

MOTION = "motion"
HUMAN = "human"
FACE = "face"


@dataclass(frozen=True)
class DetectionRecord:
    """One detector hit in full-resolution frame coordinates."""

    frame: int
    kind: str
    rect: Rect
    confidence: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise SzoomError(f"confidence must be in [0,1], got {self.confidence}")
        if not self.kind:
            raise SzoomError("detection kind must be a non-empty string")


def rasterize(
    detections: list[DetectionRecord],
    frame_w: int,
    frame_h: int,
    min_confidence: float = 0.5,
) -> ScalarMap:
    """Union of detection rectangles as a binary map.

    Records below ``min_confidence`` are dropped; surviving ones paint 1.0
    regardless of their confidence value. All records must belong to a single
    frame and kind.
    """
    if detections:
        frames = {d.frame for d in detections}
        kinds = {d.kind for d in detections}
        if len(frames) > 1 or len(kinds) > 1:
            raise SzoomError(
                f"rasterize expects one frame and kind per batch, got frames={sorted(frames)} kinds={sorted(kinds)}"
            )
    out = np.zeros((frame_h, frame_w), dtype=np.float64)
    for det in detections:
        if det.confidence < min_confidence:
            continue
        r = det.rect
        if r.x2 > frame_w or r.y2 > frame_h or r.x < 0 or r.y < 0:
            raise SzoomError(
                f"detection rect {r} exceeds frame {frame_w}x{frame_h}"
            )
        out[r.y : r.y2, r.x : r.x2] = 1.0
    m = ScalarMap.__new__(ScalarMap)
    m.values = out
    return m


class Accumulator:
    """Sliding mean of the last ``omega`` binary maps (the persistence map).

    Before omega frames have been seen, the mean runs over however many are
    available, so the stream start has no dead zone.
    """

    def __init__(self, omega: int):
        if omega < 1:
            raise SzoomError(f"omega must be >= 1, got {omega}")
        self.omega = omega
        self.window: deque[np.ndarray] = deque(maxlen=omega)
        self._sum: np.ndarray | None = None

    def accumulate(self, new_map: ScalarMap) -> ScalarMap:
        binary = (new_map.values > 0).astype(np.float64)
        if self._sum is None:
            self._sum = np.zeros_like(binary)
        elif binary.shape != self._sum.shape:
            raise SzoomError(
                f"observation map shape {binary.shape} does not match accumulator {self._sum.shape}"
            )
        if len(self.window) == self.window.maxlen:
            self._sum -= self.window[0]
        self.window.append(binary)
        self._sum += binary
        out = ScalarMap.__new__(ScalarMap)
        out.values = self._sum / len(self.window)
        return out

    def reset(self):
        self.window.clear()
        self._sum = None


def evaluate_prf(pred: ScalarMap, truth: ScalarMap) -> tuple[float, float, float]:
    """Pixel-level precision, recall and F1 of a binary prediction.

    An empty prediction against an empty truth scores 1.0 on all three; an
    empty side against a non-empty one scores 0 for the affected metric.
    """
    if not pred.same_shape(truth):
        raise SzoomError(
            f"prediction {pred.shape} and truth {truth.shape} differ in size"
        )
    p = pred.values > 0
    t = truth.values > 0
    tp = float(np.count_nonzero(p & t))
    fp = float(np.count_nonzero(p & ~t))
    fn = float(np.count_nonzero(~p & t))
    if tp + fp + fn == 0:
        return 1.0, 1.0, 1.0
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    return precision, recall, f1


@dataclass
class MogModel:
    """Per-pixel mixture of Gaussians background model.

    A fixed number of isotropic RGB components per pixel, pruned by weight:
    an unmatched pixel replaces its lightest component. Weights are
    renormalized after every update.
    """

    n_components: int = 4
    learning_rate: float = 0.005
    variance_threshold: float = 2.5
    initial_variance: float = 15.0
    background_ratio: float = 0.9
    min_variance: float = 4.0
    weights: np.ndarray | None = field(default=None, repr=False)
    means: np.ndarray | None = field(default=None, repr=False)
    variances: np.ndarray | None = field(default=None, repr=False)

    def _init_state(self, pixels: np.ndarray):
        h, w, _ = pixels.shape
        k = self.n_components
        self.weights = np.zeros((h, w, k), dtype=np.float32)
        self.weights[:, :, 0] = 1.0
        self.means = np.zeros((h, w, k, 3), dtype=np.float32)
        self.means[:, :, 0, :] = pixels
        self.variances = np.full((h, w, k), self.initial_variance, dtype=np.float32)

    def apply(self, pixels: np.ndarray) -> np.ndarray:
        """Classify one frame (HxWx3 uint8) and update the model.

        Returns a boolean foreground mask.
        """
        x = pixels.astype(np.float32)
        if self.weights is None:
            self._init_state(x)
            return np.zeros(pixels.shape[:2], dtype=bool)
        if x.shape[:2] != self.weights.shape[:2]:
            raise SzoomError(
                f"frame size {x.shape[:2]} does not match model {self.weights.shape[:2]}"
            )

        lr = np.float32(self.learning_rate)
        diff = self.means - x[:, :, None, :]
        d2 = np.einsum("hwkc,hwkc->hwk", diff, diff)
        gate = (self.variance_threshold**2) * self.variances * 3.0
        match = (d2 <= gate) & (self.weights > 0)

        # heaviest matching component owns the pixel
        score = np.where(match, self.weights, -1.0)
        owner = np.argmax(score, axis=2)
        matched = np.take_along_axis(match, owner[:, :, None], axis=2)[:, :, 0]

        owner_onehot = np.zeros_like(self.weights, dtype=bool)
        np.put_along_axis(owner_onehot, owner[:, :, None], True, axis=2)
        upd = owner_onehot & matched[:, :, None]

        self.weights *= 1.0 - lr
        self.weights[upd] += lr

        d2_owner = np.take_along_axis(d2, owner[:, :, None], axis=2)[:, :, 0]
        mean_owner = np.take_along_axis(
            self.means, owner[:, :, None, None].repeat(3, axis=3), axis=2
        )[:, :, 0, :]
        var_owner = np.take_along_axis(self.variances, owner[:, :, None], axis=2)[
            :, :, 0
        ]
        new_mean = (1.0 - lr) * mean_owner + lr * x
        new_var = (1.0 - lr) * var_owner + lr * (d2_owner / 3.0)
        sel = upd.nonzero()
        self.means[sel[0], sel[1], sel[2], :] = new_mean[sel[0], sel[1]]
        self.variances[sel[0], sel[1], sel[2]] = new_var[sel[0], sel[1]]

        # unmatched pixels: replace the lightest component with the new sample
        lightest = np.argmin(self.weights, axis=2)
        repl = np.zeros_like(owner_onehot)
        np.put_along_axis(repl, lightest[:, :, None], True, axis=2)
        repl &= ~matched[:, :, None]
        rsel = repl.nonzero()
        self.weights[repl] = lr
        self.means[rsel[0], rsel[1], rsel[2], :] = x[rsel[0], rsel[1]]
        self.variances[repl] = self.initial_variance

        self.weights /= np.sum(self.weights, axis=2, keepdims=True)
        np.maximum(self.variances, self.min_variance, out=self.variances)

        # background components: heaviest-by-weight/sigma until their joint
        # weight passes background_ratio
        rank = self.weights / np.sqrt(self.variances)
        order = np.argsort(-rank, axis=2, kind="stable")
        w_sorted = np.take_along_axis(self.weights, order, axis=2)
        cum_before = np.cumsum(w_sorted, axis=2) - w_sorted
        bg_sorted = cum_before < self.background_ratio
        is_bg = np.zeros_like(bg_sorted)
        np.put_along_axis(is_bg, order, bg_sorted, axis=2)
        owner_bg = np.take_along_axis(is_bg, owner[:, :, None], axis=2)[:, :, 0]
        return ~(matched & owner_bg)


_KERNEL3 = np.ones((3, 3), dtype=np.uint8)


def detect_motion(
    frame: Frame, model: MogModel, scale: float = 0.6
) -> tuple[ScalarMap, list[Rect]]:
    """Native motion observation: full-resolution binary map plus its rects.

    Downscales the frame, classifies and updates the background model, opens
    the mask with a 3x3 kernel, takes contour bounding rectangles, scales them
    back up and paints their union. The model is updated in place.
    """
    if not 0.0 < scale <= 1.0:
        raise SzoomError(f"motion scale must be in (0,1], got {scale}")
    w, h = frame.width, frame.height
    if scale < 1.0:
        small = cv2.resize(
            frame.pixels,
            (max(round(w * scale), 1), max(round(h * scale), 1)),
            interpolation=cv2.INTER_AREA,
        )
    else:
        small = frame.pixels
    fg = model.apply(small)

    mask = fg.astype(np.uint8)
    mask = cv2.erode(mask, _KERNEL3, iterations=1)
    mask = cv2.dilate(mask, _KERNEL3, iterations=1)

    contours, _ = cv2.findContours(mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
    rects: list[Rect] = []
    for c in contours:
        bx, by, bw, bh = cv2.boundingRect(c)
        r = Rect(bx, by, bw, bh)
        if scale < 1.0:
            r = scale_rect(r, 1.0 / scale)
        rects.append(clamp_rect(r, w, h))

    out = np.zeros((h, w), dtype=np.float64)
    for r in rects:
        out[r.y : r.y2, r.x : r.x2] = 1.0
    m = ScalarMap.__new__(ScalarMap)
    m.values = out
    return m, rects
