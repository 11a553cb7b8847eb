"""Final compositing: paste the original objects into the generated scene.

Pasting is a direct blend with a 2-px inward feather ramp, so pixels outside
the object masks keep the generated scene bit-for-bit. Harmonization then
shifts each object's CIELAB values by how its local background in the
generated scene differs from the mid-gray staging ground the object was
arranged on. Matching the object's statistics to its new surroundings
outright would erase its appearance entirely whenever the surroundings are
flat (the stats transform collapses to the ring's constant), and the whole
point of pasting the originals back is that the target classes keep their
pixels; the delta form preserves them exactly when the generated scene
equals the staging canvas, and otherwise tracks local color and brightness.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..compositor import (
    AnnotationSet,
    AssetStore,
    LayoutSpec,
    annotate_placements,
    place_in_frame,
    visible_masks,
)
from ..errors import DimensionMismatchError
from ..imaging import Image, lab_to_rgb, rgb_to_lab, transform_cutout
from ..imaging.blend import paste_mask_window
from ..imaging.harmonize import DEFAULT_RING_WIDTH
from .payload import MID_GRAY

FEATHER_RADIUS_PX = 2

_BALL = ndimage.generate_binary_structure(2, 2)
_GRAY_LAB = rgb_to_lab(np.full((1, 1, 3), MID_GRAY, dtype=np.uint8))[0, 0]


def _inward_feather(mask: np.ndarray) -> np.ndarray:
    """Alpha ramp over the outermost FEATHER_RADIUS_PX rows of the mask.

    Exactly 0 outside the mask and exactly 1 at depth > FEATHER_RADIUS_PX,
    so the paste never writes a pixel the mask does not own.
    """
    alpha = mask.astype(np.float64)
    eroded = mask.astype(bool)
    for _ in range(FEATHER_RADIUS_PX):
        eroded = ndimage.binary_erosion(eroded, _BALL, border_value=1)
        alpha += eroded
    return alpha / (FEATHER_RADIUS_PX + 1)


def composite_final(
    generated: Image,
    layout: LayoutSpec,
    assets: AssetStore,
    *,
    ring_width: int = DEFAULT_RING_WIDTH,
) -> tuple[Image, AnnotationSet]:
    """Paste the layout's original cutouts into the generated scene.

    Returns the harmonized composite plus annotations identical to what
    plain compositing emits for the same layout.
    """
    if (generated.width, generated.height) != layout.frame_size:
        raise DimensionMismatchError(
            f"generated image {generated.width}x{generated.height} vs layout "
            f"frame {layout.frame_size[0]}x{layout.frame_size[1]}"
        )

    moved = [
        transform_cutout(assets.cutout(p.cutout_ref), p.rotation, p.scale)
        for p in layout.placements
    ]
    in_frame_masks = [
        place_in_frame(cut.mask.data, p.position, layout.frame_size)
        for cut, p in zip(moved, layout.placements)
    ]
    full_areas = [cut.mask.area for cut in moved]

    out = generated.rgb().astype(np.float64)
    for cut, placement in zip(moved, layout.placements):
        rows, cols, mask_w = paste_mask_window(generated, cut, placement.position)
        x, y = placement.position
        src = cut.image.pixels[
            rows.start - y : rows.stop - y, cols.start - x : cols.stop - x, :3
        ].astype(np.float64)
        alpha = _inward_feather(mask_w)[:, :, None]
        out[rows, cols] = alpha * src + (1.0 - alpha) * out[rows, cols]
    pixels = np.clip(np.rint(out), 0, 255).astype(np.uint8)

    union = np.zeros((generated.height, generated.width), dtype=bool)
    for mask in in_frame_masks:
        union |= mask
    gen_rgb = generated.rgb()
    for mask, visible in zip(in_frame_masks, visible_masks(in_frame_masks)):
        if not visible.any():
            continue
        ring = ndimage.binary_dilation(mask, _BALL, iterations=ring_width) & ~union
        if not ring.any():
            continue
        shift = rgb_to_lab(gen_rgb[ring]).mean(axis=0) - _GRAY_LAB
        lab = rgb_to_lab(pixels[visible])
        pixels[visible] = lab_to_rgb(lab + shift)

    annotations = annotate_placements(layout, assets, in_frame_masks, full_areas)
    return Image(pixels), annotations
