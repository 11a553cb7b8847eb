"""Cutout extraction and geometric augmentation."""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..errors import DegenerateScaleError, DimensionMismatchError, EmptyMaskError
from .core import Cutout, Image, Mask


def extract_cutout(image: Image, mask: Mask, class_label: int, instance_id: str) -> Cutout:
    """Crop ``image`` to the tight bounding box of ``mask``.

    The crop keeps the original color values everywhere inside the box (so
    later resampling near the mask edge mixes with real surroundings rather
    than black), and the alpha channel encodes the mask.
    """
    if (image.height, image.width) != (mask.height, mask.width):
        raise DimensionMismatchError(
            f"image {image.width}x{image.height} vs mask {mask.width}x{mask.height}"
        )
    box = mask.bbox()
    if box is None:
        raise EmptyMaskError("cannot extract a cutout from an empty mask")
    r0, r1 = int(box.y_min), int(box.y_max)
    c0, c1 = int(box.x_min), int(box.x_max)
    sub_mask = mask.data[r0:r1, c0:c1]
    rgba = np.empty((r1 - r0, c1 - c0, 4), dtype=np.uint8)
    rgba[:, :, :3] = image.rgb()[r0:r1, c0:c1]
    rgba[:, :, 3] = sub_mask * np.uint8(255)
    return Cutout(
        image=Image(rgba),
        mask=Mask(sub_mask.copy()),
        class_label=class_label,
        instance_id=instance_id,
    )


def _rotated_canvas_shape(h: int, w: int, rotation_deg: float, scale: float) -> tuple[int, int]:
    theta = math.radians(rotation_deg)
    c, s = abs(math.cos(theta)), abs(math.sin(theta))
    out_w = scale * (w * c + h * s)
    out_h = scale * (w * s + h * c)
    # the tiny epsilon keeps exact multiples of 90 degrees from ceiling up
    return max(1, math.ceil(out_h - 1e-9)), max(1, math.ceil(out_w - 1e-9))


def _inverse_map(
    h: int, w: int, rotation: float, scale: float
) -> tuple[np.ndarray, np.ndarray, tuple[int, int]]:
    """(matrix, offset, canvas shape) mapping output pixels to input pixels.

    Rotation about the image center, counter-clockwise in image axes, so the
    object stays centered in a canvas just big enough to contain it.
    """
    out_h, out_w = _rotated_canvas_shape(h, w, rotation, scale)
    theta = math.radians(rotation)
    cos_t, sin_t = math.cos(theta), math.sin(theta)
    inv = np.array([[cos_t, sin_t], [-sin_t, cos_t]]) / scale
    in_center = np.array([(h - 1) / 2.0, (w - 1) / 2.0])
    out_center = np.array([(out_h - 1) / 2.0, (out_w - 1) / 2.0])
    offset = in_center - inv @ out_center
    return inv, offset, (out_h, out_w)


def _transform_mask_raw(
    mask: np.ndarray, inv: np.ndarray, offset: np.ndarray, shape: tuple[int, int]
) -> np.ndarray:
    # Pad with one zero ring: scipy clips continuous coordinates to [0, n-1]
    # before rounding, which would drop edge pixels landing at e.g. -0.25;
    # with the pad those round onto real pixels while far out-of-range
    # coordinates still read zero.
    return ndimage.affine_transform(
        np.pad(mask, 1), inv, offset=offset + 1.0, output_shape=shape,
        order=0, mode="constant", cval=0,
    )


def _tight_window(mask: np.ndarray) -> tuple[int, int, int, int]:
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    return rows[0], rows[-1] + 1, cols[0], cols[-1] + 1


def transform_mask(cutout: Cutout, rotation: float, scale: float) -> Mask:
    """The mask half of :func:`transform_cutout`, skipping the color work.

    Guaranteed identical to ``transform_cutout(...).mask`` — layout sampling
    uses this to test placements without resampling RGB three times.
    """
    _check_scale(cutout, scale)
    if rotation % 360 == 0 and scale == 1:
        return cutout.mask
    inv, offset, shape = _inverse_map(cutout.height, cutout.width, rotation, scale)
    out_mask = _transform_mask_raw(cutout.mask.data, inv, offset, shape)
    if not out_mask.any():
        raise DegenerateScaleError("transformed mask vanished")
    r0, r1, c0, c1 = _tight_window(out_mask)
    return Mask(np.ascontiguousarray(out_mask[r0:r1, c0:c1]))


def _check_scale(cutout: Cutout, scale: float) -> None:
    if scale <= 0:
        raise ValueError(f"scale must be > 0, got {scale}")
    if scale * cutout.width < 1.0 or scale * cutout.height < 1.0:
        raise DegenerateScaleError(
            f"scale {scale} collapses {cutout.width}x{cutout.height} below 1x1"
        )


def transform_cutout(cutout: Cutout, rotation: float, scale: float) -> Cutout:
    """Rotate (degrees, counter-clockwise) and scale a cutout.

    Color is resampled bilinearly, the mask nearest-neighbor, and the result
    is re-cropped tight. Raises DegenerateScale when the scaled extent
    collapses below one pixel.
    """
    _check_scale(cutout, scale)
    if rotation % 360 == 0 and scale == 1:
        return cutout

    inv, offset, (out_h, out_w) = _inverse_map(cutout.height, cutout.width, rotation, scale)
    rgba = cutout.image.pixels.astype(np.float64)
    out_rgb = np.stack(
        [
            ndimage.affine_transform(
                rgba[:, :, ch], inv, offset=offset, output_shape=(out_h, out_w),
                order=1, mode="nearest",
            )
            for ch in range(3)
        ],
        axis=-1,
    )
    out_mask = _transform_mask_raw(cutout.mask.data, inv, offset, (out_h, out_w))
    if not out_mask.any():
        raise DegenerateScaleError("transformed mask vanished")

    r0, r1, c0, c1 = _tight_window(out_mask)
    tight_mask = out_mask[r0:r1, c0:c1]
    out = np.empty((r1 - r0, c1 - c0, 4), dtype=np.uint8)
    out[:, :, :3] = np.clip(np.rint(out_rgb[r0:r1, c0:c1]), 0, 255).astype(np.uint8)
    out[:, :, 3] = tight_mask * np.uint8(255)
    return Cutout(
        image=Image(out),
        mask=Mask(np.ascontiguousarray(tight_mask)),
        class_label=cutout.class_label,
        instance_id=cutout.instance_id,
    )
