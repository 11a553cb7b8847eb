import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles` / `helpers`

from ocsynth.imaging import Cutout, Image, Mask


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_image(rng: np.random.Generator, h: int = 64, w: int = 64) -> Image:
    return Image(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))


def smooth_image(rng: np.random.Generator, h: int = 96, w: int = 96) -> Image:
    """Blobby low-frequency image: a few soft ellipses over a gradient."""
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    base = 40.0 + 120.0 * xx / w + 40.0 * yy / h
    img = np.stack([base, base * 0.9, base * 1.1], axis=-1)
    for _ in range(rng.integers(2, 5)):
        cy, cx = rng.uniform(0.2, 0.8) * h, rng.uniform(0.2, 0.8) * w
        ry, rx = rng.uniform(6, h / 4), rng.uniform(6, w / 4)
        color = rng.uniform(0, 255, size=3)
        inside = ((yy - cy) / ry) ** 2 + ((xx - cx) / rx) ** 2 <= 1.0
        img[inside] = color
    return Image(np.clip(img, 0, 255).astype(np.uint8))


def disk_mask(h: int, w: int, cy: float, cx: float, radius: float) -> Mask:
    yy, xx = np.mgrid[0:h, 0:w]
    return Mask((((yy - cy) ** 2 + (xx - cx) ** 2) <= radius**2).astype(np.uint8))


def rect_mask(h: int, w: int, r0: int, c0: int, r1: int, c1: int) -> Mask:
    m = np.zeros((h, w), dtype=np.uint8)
    m[r0:r1, c0:c1] = 1
    return Mask(m)


def solid_cutout(
    h: int, w: int, color: tuple[int, int, int], label: int = 0, inst: str = "i0"
) -> Cutout:
    rgba = np.zeros((h, w, 4), dtype=np.uint8)
    rgba[:, :, 0], rgba[:, :, 1], rgba[:, :, 2] = color
    rgba[:, :, 3] = 255
    return Cutout(Image(rgba), Mask(np.ones((h, w), np.uint8)), label, inst)


def textured_cutout(
    rng: np.random.Generator, h: int, w: int, label: int = 0, inst: str = "t0"
) -> Cutout:
    """Elliptical cutout with smooth texture, for realistic paste tests."""
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    mask = (((yy - (h - 1) / 2) / (h / 2)) ** 2 + ((xx - (w - 1) / 2) / (w / 2)) ** 2) <= 1.0
    mask[0, w // 2] = True  # keep the crop tight on all four edges
    mask[-1, w // 2] = True
    mask[h // 2, 0] = True
    mask[h // 2, -1] = True
    base = rng.uniform(30, 220, size=3)
    tex = np.stack(
        [base[i] + 25 * np.sin(xx / 7 + i) + 25 * np.cos(yy / 5 - i) for i in range(3)],
        axis=-1,
    )
    rgba = np.zeros((h, w, 4), dtype=np.uint8)
    rgba[:, :, :3] = np.clip(tex, 0, 255).astype(np.uint8)
    rgba[:, :, 3] = mask.astype(np.uint8) * 255
    return Cutout(Image(rgba), Mask(mask.astype(np.uint8)), label, inst)


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(20260822)
