"""Raster types shared by every synthesis method.

Images are row-major uint8 arrays of shape (height, width, channels) with 3
(RGB) or 4 (RGBA) channels; masks are binary (height, width) uint8 arrays
holding 0/1. Both are thin wrappers that validate their invariants once at
construction and expose the raw array for numpy work.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PilImage

from ..boxes import BBox, bbox_of_mask
from ..errors import DimensionMismatchError, EmptyMaskError, IoFailure


@dataclass(frozen=True)
class Image:
    """8-bit RGB or RGBA raster."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = self.pixels
        if px.ndim != 3 or px.shape[2] not in (3, 4):
            raise ValueError(f"image must be (h, w, 3|4), got {px.shape}")
        if px.dtype != np.uint8:
            raise ValueError(f"image must be uint8, got {px.dtype}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be at least 1x1")

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    def rgb(self) -> np.ndarray:
        """The color planes, dropping alpha when present."""
        return self.pixels[:, :, :3]

    def alpha(self) -> np.ndarray | None:
        return self.pixels[:, :, 3] if self.channels == 4 else None


@dataclass(frozen=True)
class Mask:
    """Binary raster with values in {0, 1}."""

    data: np.ndarray

    def __post_init__(self) -> None:
        d = self.data
        if d.ndim != 2:
            raise ValueError(f"mask must be 2-D, got shape {d.shape}")
        if d.dtype != np.uint8:
            raise ValueError(f"mask must be uint8, got {d.dtype}")
        if d.size and int(d.max(initial=0)) > 1:
            raise ValueError("mask values must be 0 or 1")

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def area(self) -> int:
        return int(self.data.sum())

    def bbox(self) -> BBox | None:
        return bbox_of_mask(self.data)


@dataclass(frozen=True)
class Cutout:
    """Masked object instance: RGBA image cropped tight to its mask.

    Invariants: the mask support equals the nonzero-alpha support, the mask
    is nonempty, and the crop is tight (the mask touches every edge of its
    own frame).
    """

    image: Image
    mask: Mask
    class_label: int
    instance_id: str

    def __post_init__(self) -> None:
        if self.image.channels != 4:
            raise ValueError("cutout image must be RGBA")
        if (self.image.height, self.image.width) != (self.mask.height, self.mask.width):
            raise DimensionMismatchError(
                f"cutout image {self.image.width}x{self.image.height} vs "
                f"mask {self.mask.width}x{self.mask.height}"
            )
        if self.mask.area == 0:
            raise EmptyMaskError("cutout mask is empty")
        alpha_support = self.image.pixels[:, :, 3] > 0
        if not np.array_equal(alpha_support, self.mask.data.astype(bool)):
            raise ValueError("cutout alpha support must equal mask support")
        m = self.mask.data
        if not (m[0].any() and m[-1].any() and m[:, 0].any() and m[:, -1].any()):
            raise ValueError("cutout mask must be cropped tight")

    @property
    def height(self) -> int:
        return self.mask.height

    @property
    def width(self) -> int:
        return self.mask.width


@dataclass(frozen=True)
class ColorStats:
    """Per-channel first and second moments in a named color space."""

    mean: np.ndarray
    std: np.ndarray
    space: str  # "linear-rgb" or "cielab"

    def __post_init__(self) -> None:
        if np.any(self.std < 0):
            raise ValueError("std must be >= 0")


def color_stats(values: np.ndarray, space: str) -> ColorStats:
    """Moments over an (n, channels) sample array."""
    return ColorStats(
        mean=values.mean(axis=0),
        std=values.std(axis=0),
        space=space,
    )


# --- file I/O ----------------------------------------------------------------

def load_image(path: str | Path) -> Image:
    """Read a PNG or JPEG as RGB/RGBA."""
    try:
        with PilImage.open(path) as im:
            if im.mode not in ("RGB", "RGBA"):
                im = im.convert("RGBA" if "A" in im.mode or im.mode == "P" else "RGB")
            return Image(np.asarray(im, dtype=np.uint8).copy())
    except OSError as exc:
        raise IoFailure(f"cannot read image {path}: {exc}") from exc


def save_image(image: Image, path: str | Path) -> None:
    """Write PNG (any depth of RGB/RGBA); parent directory must exist.

    PNGs use a fixed low compression level: encoding time dominates batch
    generation otherwise, and a fixed level keeps output byte-stable.
    """
    try:
        kwargs = {"compress_level": 1} if str(path).lower().endswith(".png") else {}
        PilImage.fromarray(image.pixels).save(path, **kwargs)
    except OSError as exc:
        raise IoFailure(f"cannot write image {path}: {exc}") from exc


def load_mask(path: str | Path) -> Mask:
    """Read a single-channel PNG mask encoded as 0/255."""
    try:
        with PilImage.open(path) as im:
            if im.mode != "L":
                im = im.convert("L")
            raw = np.asarray(im, dtype=np.uint8)
    except OSError as exc:
        raise IoFailure(f"cannot read mask {path}: {exc}") from exc
    return Mask((raw >= 128).astype(np.uint8))


def save_mask(mask: Mask, path: str | Path) -> None:
    try:
        PilImage.fromarray(mask.data * np.uint8(255), mode="L").save(path)
    except OSError as exc:
        raise IoFailure(f"cannot write mask {path}: {exc}") from exc


def load_depth_mm(path: str | Path) -> np.ndarray:
    """Read a 16-bit PNG depth map in millimeters; zero means missing."""
    try:
        with PilImage.open(path) as im:
            if im.mode not in ("I", "I;16"):
                raise IoFailure(f"depth image {path} must be 16-bit PNG, got mode {im.mode}")
            return np.asarray(im, dtype=np.uint16).copy()
    except OSError as exc:
        raise IoFailure(f"cannot read depth {path}: {exc}") from exc


def save_depth_mm(depth: np.ndarray, path: str | Path) -> None:
    if depth.dtype != np.uint16 or depth.ndim != 2:
        raise ValueError("depth must be a 2-D uint16 array of millimeters")
    try:
        PilImage.fromarray(depth).save(path)
    except OSError as exc:
        raise IoFailure(f"cannot write depth {path}: {exc}") from exc
