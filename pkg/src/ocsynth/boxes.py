"""Axis-aligned 2D bounding boxes and the YOLO label line format.

Boxes live in continuous pixel coordinates: a mask pixel at (row, col)
occupies the unit square [col, col+1) x [row, row+1), so the tight box of a
mask has integer edges and its area equals the pixel count of a solid mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BBox:
    """Box with x_min < x_max and y_min < y_max, in pixels."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate box {self}")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def clip(self, frame_w: int, frame_h: int) -> "BBox | None":
        """Clip to the frame; None when nothing remains."""
        x0 = max(self.x_min, 0.0)
        y0 = max(self.y_min, 0.0)
        x1 = min(self.x_max, float(frame_w))
        y1 = min(self.y_max, float(frame_h))
        if x0 >= x1 or y0 >= y1:
            return None
        return BBox(x0, y0, x1, y1)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.y_min, self.x_max, self.y_max)


def bbox_of_mask(mask: np.ndarray) -> BBox | None:
    """Tight integer-edged box around the nonzero pixels of a 2D array."""
    rows = np.flatnonzero(mask.any(axis=1))
    cols = np.flatnonzero(mask.any(axis=0))
    if rows.size == 0:
        return None
    return BBox(
        float(cols[0]),
        float(rows[0]),
        float(cols[-1] + 1),
        float(rows[-1] + 1),
    )


def to_yolo_line(class_index: int, box: BBox, frame_w: int, frame_h: int) -> str:
    """Normalized "class cx cy w h" with 6 decimal places."""
    cx = (box.x_min + box.x_max) / 2.0 / frame_w
    cy = (box.y_min + box.y_max) / 2.0 / frame_h
    w = box.width / frame_w
    h = box.height / frame_h
    return f"{class_index} {cx:.6f} {cy:.6f} {w:.6f} {h:.6f}"


def from_yolo_fields(
    cx: float, cy: float, w: float, h: float, frame_w: int, frame_h: int
) -> BBox:
    """Inverse of :func:`to_yolo_line` for already-parsed normalized fields.

    Coordinates are clamped into the frame: the 6-decimal quantization can
    push a frame-edge box a hair outside it.
    """
    half_w = w * frame_w / 2.0
    half_h = h * frame_h / 2.0
    px = cx * frame_w
    py = cy * frame_h
    return BBox(
        max(px - half_w, 0.0),
        max(py - half_h, 0.0),
        min(px + half_w, float(frame_w)),
        min(py + half_h, float(frame_h)),
    )


def parse_yolo_line(line: str, frame_w: int, frame_h: int) -> tuple[int, BBox]:
    parts = line.split()
    if len(parts) != 5:
        raise ValueError(f"expected 5 fields in YOLO label line, got {len(parts)}")
    cls = int(parts[0])
    cx, cy, w, h = (float(p) for p in parts[1:])
    return cls, from_yolo_fields(cx, cy, w, h, frame_w, frame_h)
