"""Pixel-level occlusion arithmetic over placed masks."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from ..errors import DimensionMismatchError, EmptyInputError
from .core import Mask


def occlusion_fraction(masks: Sequence[Mask]) -> float:
    """|pixels covered by >= 2 masks| / sum of all mask areas.

    The denominator counts every mask's full area, so the ratio lives in
    [0, 0.5] for pairwise overlap and [0, 1) in general.
    """
    if not masks:
        raise EmptyInputError("no masks given")
    shape = masks[0].data.shape
    for m in masks[1:]:
        if m.data.shape != shape:
            raise DimensionMismatchError(
                f"mask shapes differ: {shape} vs {m.data.shape}"
            )
    total_area = sum(m.area for m in masks)
    if total_area == 0:
        raise EmptyInputError("all masks are empty")
    coverage = np.zeros(shape, dtype=np.int32)
    for m in masks:
        coverage += m.data
    overlap = int((coverage >= 2).sum())
    return overlap / total_area


def per_mask_occluded_fraction(masks: Sequence[Mask]) -> list[float]:
    """For each mask, the fraction of its area covered by any *later* mask.

    Later masks are drawn on top, so this is each object's hidden fraction
    under painter's-order compositing.
    """
    if not masks:
        return []
    covered_by_later = np.zeros(masks[0].data.shape, dtype=bool)
    out = [0.0] * len(masks)
    for i in range(len(masks) - 1, -1, -1):
        m = masks[i].data.astype(bool)
        area = int(m.sum())
        out[i] = float((m & covered_by_later).sum() / area) if area else 0.0
        covered_by_later |= m
    return out
