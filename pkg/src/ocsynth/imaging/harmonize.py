"""Statistic-matching color harmonization in CIELAB."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..errors import EmptyMaskError, EmptyRingError
from .colorspace import lab_to_rgb, rgb_to_lab
from .core import ColorStats, Image, Mask, color_stats

DEFAULT_RING_WIDTH = 8


def ring_of(region: Mask, ring_width: int = DEFAULT_RING_WIDTH) -> Mask:
    """Pixels within ``ring_width`` (chebyshev) outside the region."""
    ball = ndimage.generate_binary_structure(2, 2)
    dilated = ndimage.binary_dilation(region.data.astype(bool), ball, iterations=ring_width)
    return Mask((dilated & ~region.data.astype(bool)).astype(np.uint8))


def harmonize_region(
    image: Image, region: Mask, ring_width: int = DEFAULT_RING_WIDTH
) -> Image:
    """Match the region's per-channel CIELAB mean/std to its surrounding ring.

    Channels with zero variance in the region get only the mean shift. The
    result is converted back to sRGB and clamped; pixels outside the region
    are untouched.
    """
    if region.area == 0:
        raise EmptyMaskError("harmonization region is empty")
    if (image.height, image.width) != (region.height, region.width):
        raise EmptyMaskError(
            f"region {region.width}x{region.height} does not fit image "
            f"{image.width}x{image.height}"
        )
    ring = ring_of(region, ring_width)
    if ring.area == 0:
        raise EmptyRingError("region ring is empty (region covers the frame)")

    lab = rgb_to_lab(image.rgb())
    rsel = region.data.astype(bool)
    region_stats = color_stats(lab[rsel], "cielab")
    ring_stats = color_stats(lab[ring.data.astype(bool)], "cielab")

    shifted = _match_stats(lab[rsel], region_stats, ring_stats)
    out_lab = lab.copy()
    out_lab[rsel] = shifted

    out = image.pixels.copy()
    out[:, :, :3] = lab_to_rgb(out_lab)
    # Only the region may change; the round-trip conversion elsewhere could
    # otherwise drift off-by-one from quantization.
    keep = ~rsel
    out[keep] = image.pixels[keep]
    return Image(out)


def _match_stats(values: np.ndarray, src: ColorStats, dst: ColorStats) -> np.ndarray:
    gain = np.where(src.std > 0, dst.std / np.where(src.std > 0, src.std, 1.0), 1.0)
    return (values - src.mean) * gain + dst.mean
