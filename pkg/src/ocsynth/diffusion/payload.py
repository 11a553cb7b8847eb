"""Conditioning payloads: arrange objects, derive the edge map.

Objects are staged on a uniform mid-gray canvas — the neutral ground gives
both dark and light objects a strong edge response — and the Canny edges of
that staging image, restricted to the (3-px dilated) object masks, become
the layout conditioning sent to the generation service.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..compositor import AssetStore, LayoutSpec, place_in_frame
from ..imaging import Image, Mask, blend_paste, canny_edges, transform_cutout
from ..imaging.edges import DEFAULT_HIGH, DEFAULT_LOW, DEFAULT_SIGMA

MID_GRAY = 128
EDGE_DILATION_PX = 3


@dataclass(frozen=True)
class GenerationParams:
    """Config passthrough for the generation service."""

    positive_prompt: str = ""
    negative_prompt: str = ""
    steps: int = 20
    guidance: float = 5.0


@dataclass(frozen=True)
class ConditioningPayload:
    edge_map: Mask
    reference_background: Image
    positive_prompt: str
    negative_prompt: str
    seed: int
    steps: int
    guidance: float
    resolution: tuple[int, int]  # (width, height)

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if (self.edge_map.width, self.edge_map.height) != tuple(self.resolution):
            raise ValueError(
                f"edge map {self.edge_map.width}x{self.edge_map.height} does not "
                f"match resolution {self.resolution[0]}x{self.resolution[1]}"
            )


def _paste_on_gray(
    layout: LayoutSpec, assets: AssetStore
) -> tuple[Image, list[np.ndarray]]:
    width, height = layout.frame_size
    canvas = Image(np.full((height, width, 3), MID_GRAY, dtype=np.uint8))
    masks = []
    for placement in layout.placements:
        moved = transform_cutout(
            assets.cutout(placement.cutout_ref), placement.rotation, placement.scale
        )
        canvas = blend_paste(canvas, moved, placement.position, "direct")
        masks.append(place_in_frame(moved.mask.data, placement.position, layout.frame_size))
    return canvas, masks


def arrangement_canvas(layout: LayoutSpec, assets: AssetStore) -> Image:
    """The layout direct-pasted on the mid-gray staging canvas."""
    canvas, _ = _paste_on_gray(layout, assets)
    return canvas


def build_conditioning(
    layout: LayoutSpec,
    assets: AssetStore,
    reference_background: Image,
    params: GenerationParams,
    seed: int,
    *,
    sigma: float = DEFAULT_SIGMA,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
) -> ConditioningPayload:
    """Edge-map conditioning for one layout.

    Edges outside the union of the placed object masks (dilated 3 px) are
    zeroed: only object outlines should steer generation, not whatever
    gradients the staging canvas happens to have. An empty layout therefore
    conditions on an all-zero edge map.
    """
    canvas, masks = _paste_on_gray(layout, assets)
    edges = canny_edges(canvas, sigma=sigma, low=low, high=high)

    height, width = canvas.height, canvas.width
    allowed = np.zeros((height, width), dtype=bool)
    for mask in masks:
        allowed |= mask
    if allowed.any():
        ball = ndimage.generate_binary_structure(2, 2)
        allowed = ndimage.binary_dilation(allowed, ball, iterations=EDGE_DILATION_PX)
    edge_map = Mask((edges.data.astype(bool) & allowed).astype(np.uint8))

    return ConditioningPayload(
        edge_map=edge_map,
        reference_background=reference_background,
        positive_prompt=params.positive_prompt,
        negative_prompt=params.negative_prompt,
        seed=seed,
        steps=params.steps,
        guidance=params.guidance,
        resolution=layout.frame_size,
    )
