"""Raster types and the shared image algorithms."""

from .blend import BLEND_MODES, blend_paste
from .colorspace import lab_to_rgb, rgb_to_lab
from .core import (
    ColorStats,
    Cutout,
    Image,
    Mask,
    color_stats,
    load_depth_mm,
    load_image,
    load_mask,
    save_depth_mm,
    save_image,
    save_mask,
)
from .cutouts import extract_cutout, transform_cutout, transform_mask
from .edges import canny_edges
from .harmonize import harmonize_region, ring_of
from .occlusion import occlusion_fraction, per_mask_occluded_fraction

__all__ = [
    "BLEND_MODES",
    "ColorStats",
    "Cutout",
    "Image",
    "Mask",
    "blend_paste",
    "canny_edges",
    "color_stats",
    "extract_cutout",
    "harmonize_region",
    "lab_to_rgb",
    "load_depth_mm",
    "load_image",
    "load_mask",
    "occlusion_fraction",
    "per_mask_occluded_fraction",
    "rgb_to_lab",
    "ring_of",
    "save_depth_mm",
    "save_image",
    "save_mask",
    "transform_cutout",
    "transform_mask",
]
