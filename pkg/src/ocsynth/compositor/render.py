"""Composite rendering and annotation emission."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..boxes import BBox, bbox_of_mask
from ..errors import DimensionMismatchError
from ..imaging import Image, blend_paste, transform_cutout
from .assets import AssetStore
from .layout import place_in_frame
from .types import ROLE_TARGET, AnnotationEntry, AnnotationSet, LayoutSpec


def visible_masks(in_frame_masks: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Per-placement visibility once every higher-z mask is laid down."""
    visible = [m.copy() for m in in_frame_masks]
    for i, mask in enumerate(in_frame_masks):
        for j in range(i):
            visible[j] &= ~mask
    return visible


def annotate_placements(
    layout: LayoutSpec,
    assets: AssetStore,
    in_frame_masks: Sequence[np.ndarray],
    full_areas: Sequence[int],
    image_ref: str = "",
) -> AnnotationSet:
    """Annotations for placements whose frame masks are already known.

    Every pipeline that pastes a layout routes through here, so boxes and
    occlusion fractions cannot drift between plain compositing and the
    generation-backed variants. ``in_frame_masks`` are boolean frame-size
    masks aligned with ``layout.placements``; ``full_areas`` are the
    unclipped transformed-mask areas.
    """
    entries = []
    for placement, full_area, in_frame, visible in zip(
        layout.placements, full_areas, in_frame_masks, visible_masks(in_frame_masks)
    ):
        if placement.role != ROLE_TARGET:
            continue
        box = bbox_of_mask(in_frame.astype(np.uint8))
        if box is None:
            continue  # cannot happen for layouts honoring min_visible_px
        entries.append(
            AnnotationEntry(
                class_label=_class_of(assets, placement.cutout_ref),
                box=box,
                instance_id=f"{placement.cutout_ref}@z{placement.z_order}",
                occlusion_fraction=1.0 - int(visible.sum()) / full_area,
            )
        )
    return AnnotationSet(image_ref=image_ref, entries=tuple(entries))


def render_composite(
    layout: LayoutSpec, assets: AssetStore, image_ref: str = ""
) -> tuple[Image, AnnotationSet]:
    """Paste in z-order and annotate targets with clipped tight boxes.

    Per-object occlusion is the fraction of the transformed mask hidden by
    higher-z masks or lying outside the frame. Distractors are pasted but
    never annotated.
    """
    background = assets.background(layout.background_ref)
    if (background.width, background.height) != layout.frame_size:
        raise DimensionMismatchError(
            f"background {background.width}x{background.height} vs layout "
            f"frame {layout.frame_size[0]}x{layout.frame_size[1]}"
        )

    out = background
    in_frame_masks = []
    full_areas = []
    for placement in layout.placements:
        moved = transform_cutout(
            assets.cutout(placement.cutout_ref), placement.rotation, placement.scale
        )
        out = blend_paste(out, moved, placement.position, placement.blend_mode)
        in_frame_masks.append(
            place_in_frame(moved.mask.data, placement.position, layout.frame_size)
        )
        full_areas.append(moved.mask.area)

    annotations = annotate_placements(
        layout, assets, in_frame_masks, full_areas, image_ref
    )
    return out, annotations


def _class_of(assets: AssetStore, ref: str) -> int:
    return assets.cutout(ref).class_label


def clip_box(box: BBox, frame_size: tuple[int, int]) -> BBox | None:
    return box.clip(frame_size[0], frame_size[1])
