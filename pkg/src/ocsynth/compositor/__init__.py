"""Cut-Paste synthesis: layout sampling, compositing, batch generation."""

from .assets import AssetStore, cutout_from_rgba, load_assets
from .dataset import (
    CutPasteDatasetConfig,
    generate_cutpaste_dataset,
    per_image_seed,
    resize_background,
    write_yolo_labels,
)
from .layout import place_in_frame, sample_layout
from .render import annotate_placements, render_composite, visible_masks
from .types import (
    ROLE_DISTRACTOR,
    ROLE_TARGET,
    AnnotationEntry,
    AnnotationSet,
    CutPasteConfig,
    LayoutSpec,
    Placement2D,
)

__all__ = [
    "ROLE_DISTRACTOR",
    "ROLE_TARGET",
    "AnnotationEntry",
    "AnnotationSet",
    "AssetStore",
    "CutPasteConfig",
    "CutPasteDatasetConfig",
    "LayoutSpec",
    "Placement2D",
    "annotate_placements",
    "cutout_from_rgba",
    "generate_cutpaste_dataset",
    "load_assets",
    "per_image_seed",
    "place_in_frame",
    "render_composite",
    "resize_background",
    "sample_layout",
    "visible_masks",
    "write_yolo_labels",
]
