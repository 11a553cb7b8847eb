"""Fixture builders shared across compositor/diffusion/CLI tests."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as PilImage

CLASS_NAMES = ["widget", "gadget"]


def _ellipse_rgba(h: int, w: int, color: tuple[int, int, int]) -> np.ndarray:
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    inside = (((yy - (h - 1) / 2) / (h / 2)) ** 2 + ((xx - (w - 1) / 2) / (w / 2)) ** 2) <= 1.0
    inside[0, w // 2] = inside[-1, w // 2] = True
    inside[h // 2, 0] = inside[h // 2, -1] = True
    rgba = np.zeros((h, w, 4), dtype=np.uint8)
    rgba[:, :, 0], rgba[:, :, 1], rgba[:, :, 2] = color
    rgba[:, :, 3] = inside.astype(np.uint8) * 255
    return rgba


def _rect_rgba(h: int, w: int, color: tuple[int, int, int]) -> np.ndarray:
    rgba = np.zeros((h, w, 4), dtype=np.uint8)
    rgba[:, :, 0], rgba[:, :, 1], rgba[:, :, 2] = color
    rgba[:, :, 3] = 255
    return rgba


def build_asset_dirs(root: Path, bg_size: tuple[int, int] = (256, 192)) -> tuple[Path, Path]:
    """cutouts/ with two target classes + one distractor class; backgrounds/."""
    cut = root / "cutouts"
    for name, shapes in {
        "widget": [_ellipse_rgba(48, 56, (220, 60, 40)), _rect_rgba(40, 40, (200, 160, 20))],
        "gadget": [_ellipse_rgba(56, 44, (30, 90, 210)), _rect_rgba(36, 52, (90, 200, 120))],
        "clutter": [_ellipse_rgba(32, 32, (120, 120, 120))],
    }.items():
        d = cut / name
        d.mkdir(parents=True, exist_ok=True)
        for i, rgba in enumerate(shapes):
            PilImage.fromarray(rgba).save(d / f"{name}{i}.png")

    bgs = root / "backgrounds"
    bgs.mkdir(parents=True, exist_ok=True)
    w, h = bg_size
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    for i, phase in enumerate((0.0, 2.0)):
        img = np.stack(
            [
                120 + 60 * np.sin(xx / 40 + phase),
                110 + 50 * np.cos(yy / 30 + phase),
                100 + 40 * np.sin((xx + yy) / 50),
            ],
            axis=-1,
        )
        PilImage.fromarray(np.clip(img, 0, 255).astype(np.uint8)).save(bgs / f"bg{i}.png")
    return cut, bgs
