"""Canny edge detection.

Stages, in order: grayscale, Gaussian smoothing with an explicit kernel of
radius ceil(3*sigma), Sobel gradients, non-maximum suppression along the
gradient direction quantized to four sectors, and double-threshold
hysteresis where weak pixels survive iff their 8-connected component
contains a strong pixel.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..errors import InvalidThresholdsError
from .core import Image, Mask

# BT.601 luma, the common default for 8-bit imagery.
_LUMA = np.array([0.299, 0.587, 0.114])

DEFAULT_SIGMA = 1.4
DEFAULT_LOW = 100.0
DEFAULT_HIGH = 200.0


def _gaussian_kernel(sigma: float) -> np.ndarray:
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _smooth(gray: np.ndarray, sigma: float) -> np.ndarray:
    k = _gaussian_kernel(sigma)
    out = ndimage.correlate1d(gray, k, axis=0, mode="reflect")
    return ndimage.correlate1d(out, k, axis=1, mode="reflect")


def _sobel(smoothed: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gx = ndimage.sobel(smoothed, axis=1, mode="reflect")
    gy = ndimage.sobel(smoothed, axis=0, mode="reflect")
    return gx, gy


def _nms(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep pixels that are local maxima along the quantized gradient.

    Sector boundaries at 22.5 degrees. The comparison is strict against one
    neighbor and non-strict against the other so a two-pixel plateau (a step
    edge landing exactly between samples) thins to a single line.
    """
    h, w = mag.shape
    padded = np.pad(mag, 1, mode="edge")

    ax, ay = np.abs(gx), np.abs(gy)
    tan225 = math.tan(math.radians(22.5))
    tan675 = math.tan(math.radians(67.5))
    horiz = ay <= tan225 * ax                  # gradient ~ horizontal: compare left/right
    vert = ay > tan675 * ax                    # gradient ~ vertical: compare up/down
    diag = ~horiz & ~vert
    same_sign = (gx * gy) > 0                  # 45-deg family vs 135-deg family

    n1 = np.empty_like(mag)
    n2 = np.empty_like(mag)
    center = padded[1 : h + 1, 1 : w + 1]
    assert center.shape == mag.shape

    west, east = padded[1 : h + 1, 0:w], padded[1 : h + 1, 2 : w + 2]
    north, south = padded[0:h, 1 : w + 1], padded[2 : h + 2, 1 : w + 1]
    nw, se = padded[0:h, 0:w], padded[2 : h + 2, 2 : w + 2]
    ne, sw = padded[0:h, 2 : w + 2], padded[2 : h + 2, 0:w]

    n1[horiz], n2[horiz] = west[horiz], east[horiz]
    n1[vert], n2[vert] = north[vert], south[vert]
    d135 = diag & same_sign                    # gradient along NW-SE
    d45 = diag & ~same_sign                    # gradient along NE-SW
    n1[d135], n2[d135] = nw[d135], se[d135]
    n1[d45], n2[d45] = ne[d45], sw[d45]

    return (center > n1) & (center >= n2)


def _hysteresis(mag: np.ndarray, keep: np.ndarray, low: float, high: float) -> np.ndarray:
    weak = keep & (mag > low)
    strong = weak & (mag > high)
    if not strong.any():
        return np.zeros_like(strong)
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=int))
    good = np.zeros(n + 1, dtype=bool)
    good[np.unique(labels[strong])] = True
    return good[labels]


def canny_edges(
    image: Image,
    sigma: float = DEFAULT_SIGMA,
    low: float = DEFAULT_LOW,
    high: float = DEFAULT_HIGH,
) -> Mask:
    """Edge mask of an RGB(A) image; thresholds on a 0-255 gradient scale."""
    if low >= high:
        raise InvalidThresholdsError(f"low ({low}) must be < high ({high})")
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    gray = image.rgb().astype(np.float64) @ _LUMA
    smoothed = _smooth(gray, sigma)
    gx, gy = _sobel(smoothed)
    mag = np.hypot(gx, gy)
    keep = _nms(mag, gx, gy)
    edges = _hysteresis(mag, keep, low, high)
    return Mask(edges.astype(np.uint8))
