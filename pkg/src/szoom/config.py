"""Pipeline configuration and the flat key=value config file format."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import ConfigError
from .fusion import FusionWeights


@dataclass
class PipelineConfig:
    """All knobs of one retargeting run.

    `omega` is the default accumulation window; per-kind overrides come from
    `omega_<kind>` keys. `min_area` is in px^2 on the decision map; when
    unset it defaults to 0.0005 of the frame area at run time.
    """

    omega: int = 4
    omega_overrides: dict[str, int] = field(default_factory=dict)
    delta_seconds: float = 5.0
    fps: float | None = None
    alpha: float = 0.3
    weights: dict[str, float] = field(
        default_factory=lambda: {"motion": 0.46, "human": 0.53, "face": 0.01}
    )
    threshold: float = 0.2
    merge_dist: float = 16.0
    min_area: float | None = None
    motion_scale: float = 0.6
    human_scale: float = 0.8
    out_w: int = 384
    out_h: int = 216
    a_pct: float = 20.0
    b_pct: float = 30.0
    smoother_window: int = 5
    min_confidence: float = 0.5
    mog_components: int = 4
    mog_learning_rate: float = 0.005
    mog_variance_threshold: float = 2.5
    mog_initial_variance: float = 15.0
    mog_background_ratio: float = 0.9
    seed: int = 0

    def omega_for(self, kind: str) -> int:
        return self.omega_overrides.get(kind, self.omega)

    def fusion_weights(self) -> FusionWeights:
        return FusionWeights(self.weights)

    def validate(self):
        if self.omega < 1:
            raise ConfigError(f"omega must be >= 1, got {self.omega}")
        if self.delta_seconds <= 0:
            raise ConfigError(f"delta_seconds must be positive, got {self.delta_seconds}")
        if self.fps is not None and self.fps <= 0:
            raise ConfigError(f"fps must be positive, got {self.fps}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must be in [0,1], got {self.alpha}")
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError(f"threshold must be in (0,1), got {self.threshold}")
        if self.merge_dist < 0:
            raise ConfigError(f"merge_dist must be >= 0, got {self.merge_dist}")
        if self.min_area is not None and self.min_area < 0:
            raise ConfigError(f"min_area must be >= 0, got {self.min_area}")
        for name, scale in (("motion_scale", self.motion_scale), ("human_scale", self.human_scale)):
            if not 0.0 < scale <= 1.0:
                raise ConfigError(f"{name} must be in (0,1], got {scale}")
        if self.out_w < 1 or self.out_h < 1:
            raise ConfigError(f"output size must be positive, got {self.out_w}x{self.out_h}")
        if self.a_pct <= 0 or self.b_pct <= 0 or 2 * self.a_pct + self.b_pct >= 100:
            raise ConfigError(
                f"phase percentages A={self.a_pct} B={self.b_pct} must be positive with 2A+B < 100"
            )
        if self.smoother_window < 1:
            raise ConfigError(f"smoother_window must be >= 1, got {self.smoother_window}")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ConfigError(f"min_confidence must be in [0,1], got {self.min_confidence}")
        if self.mog_components < 1:
            raise ConfigError(f"mog_components must be >= 1, got {self.mog_components}")
        try:
            self.fusion_weights()
        except Exception as e:
            raise ConfigError(str(e)) from None


_INT_KEYS = {"omega", "out_w", "out_h", "smoother_window", "mog_components", "seed"}
_FLOAT_KEYS = {
    "delta_seconds",
    "fps",
    "alpha",
    "threshold",
    "merge_dist",
    "min_area",
    "motion_scale",
    "human_scale",
    "a_pct",
    "b_pct",
    "min_confidence",
    "mog_learning_rate",
    "mog_variance_threshold",
    "mog_initial_variance",
    "mog_background_ratio",
}


def _parse_value(key: str, raw: str, lineno: int, path: str):
    try:
        if key in _INT_KEYS or key.startswith("omega_"):
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{path}:{lineno}: bad value for {key!r}: {raw!r}") from None


def parse_config_text(text: str, path: str = "<config>") -> PipelineConfig:
    cfg = PipelineConfig()
    weights: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        if key.startswith("weight_"):
            kind = key[len("weight_"):]
            if not kind:
                raise ConfigError(f"{path}:{lineno}: weight key needs a kind suffix")
            weights[kind] = _parse_value(key, value, lineno, path)
        elif key.startswith("omega_"):
            kind = key[len("omega_"):]
            if not kind:
                raise ConfigError(f"{path}:{lineno}: omega key needs a kind suffix")
            cfg.omega_overrides[kind] = _parse_value(key, value, lineno, path)
        elif key in _INT_KEYS or key in _FLOAT_KEYS:
            setattr(cfg, key, _parse_value(key, value, lineno, path))
        else:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
    if weights:
        cfg = replace(cfg, weights=weights)
    cfg.validate()
    return cfg


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config_text(text, str(path))
