"""Layout and annotation types for the 2D paste pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..boxes import BBox
from ..errors import ConfigError
from ..imaging.blend import BLEND_MODES

ROLE_TARGET = "target"
ROLE_DISTRACTOR = "distractor"


@dataclass(frozen=True)
class Placement2D:
    cutout_ref: str
    role: str                   # target | distractor
    position: tuple[int, int]   # top-left (x, y); may lie outside the frame
    rotation: float             # degrees
    scale: float
    blend_mode: str
    z_order: int

    def __post_init__(self) -> None:
        if self.role not in (ROLE_TARGET, ROLE_DISTRACTOR):
            raise ValueError(f"bad role {self.role!r}")
        if self.blend_mode not in BLEND_MODES:
            raise ValueError(f"bad blend mode {self.blend_mode!r}")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


@dataclass(frozen=True)
class LayoutSpec:
    background_ref: str
    frame_size: tuple[int, int]  # (width, height)
    placements: tuple[Placement2D, ...]
    rng_seed: int

    def __post_init__(self) -> None:
        zs = [p.z_order for p in self.placements]
        if len(set(zs)) != len(zs):
            raise ValueError("z_order values must be unique within a layout")
        if list(zs) != sorted(zs):
            raise ValueError("placements must be ordered by z_order")


@dataclass(frozen=True)
class AnnotationEntry:
    class_label: int
    box: BBox
    instance_id: str
    occlusion_fraction: float


@dataclass(frozen=True)
class AnnotationSet:
    image_ref: str
    entries: tuple[AnnotationEntry, ...]


@dataclass(frozen=True)
class CutPasteConfig:
    """Layout-sampling knobs.

    Scale is driven by frame proportion: each pasted object's (unrotated)
    width is drawn as a fraction of the frame width in [min_frac, max_frac].
    """

    min_objects: int = 1
    max_objects: int = 6
    max_distractors: int = 3
    max_occlusion: float = 0.5
    min_visible_px: int = 400
    rotation_range: tuple[float, float] = (0.0, 360.0)
    min_frac: float = 0.15
    max_frac: float = 0.4
    blend_modes: tuple[str, ...] = BLEND_MODES
    attempts: int = 50

    def __post_init__(self) -> None:
        if not (1 <= self.min_objects <= self.max_objects):
            raise ConfigError("need 1 <= min_objects <= max_objects")
        if not (0 <= self.max_occlusion < 1):
            raise ConfigError("need 0 <= max_occlusion < 1")
        if self.max_distractors < 0:
            raise ConfigError("max_distractors must be >= 0")
        if not (0 < self.min_frac <= self.max_frac <= 1):
            raise ConfigError("need 0 < min_frac <= max_frac <= 1")
        if self.min_visible_px < 1:
            raise ConfigError("min_visible_px must be >= 1")
        unknown = set(self.blend_modes) - set(BLEND_MODES)
        if unknown or not self.blend_modes:
            raise ConfigError(f"bad blend modes {self.blend_modes}")
        if self.attempts < 1:
            raise ConfigError("attempts must be >= 1")
