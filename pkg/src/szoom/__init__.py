"""szoom: automatic zoom into high-resolution surveillance video.

The engine fuses per-frame semantic observations (motion, humans, faces, or
any custom detector stream) into a sensitivity map, keeps scene coverage fair
with a decaying Gaussian penalty, tracks the chosen region, and renders a
smoothly zooming low-resolution output with a per-frame trajectory log.
"""

from .errors import ConfigError, DetectionStreamError, InputError, SzoomError
from .geometry import Frame, Rect, ScalarMap, adjust_aspect, clamp_rect, iou, scale_rect

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DetectionStreamError",
    "Frame",
    "InputError",
    "Rect",
    "ScalarMap",
    "SzoomError",
    "adjust_aspect",
    "clamp_rect",
    "iou",
    "scale_rect",
    "__version__",
]
