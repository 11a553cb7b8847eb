"""Independent reference implementations the tests check against.

Each oracle takes a different route than the library code: dense linear
algebra instead of iteration, an external detector instead of the staged
pipeline, per-pixel loops instead of vectorized arithmetic. Keep them slow
and obvious.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse
import scipy.sparse.linalg


def dense_poisson_solve(bg: np.ndarray, src: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Direct sparse solve of the seamless-cloning system for one channel.

    Same discretization as the library: unknowns are mask pixels, Dirichlet
    values are in-window background pixels outside the mask, missing
    neighbors at the window edge drop out of the equation.
    """
    h, w = mask.shape
    idx = -np.ones((h, w), dtype=int)
    ys, xs = np.nonzero(mask)
    idx[ys, xs] = np.arange(len(ys))
    n = len(ys)
    A = scipy.sparse.lil_matrix((n, n))
    b = np.zeros(n)
    for k in range(n):
        r, c = ys[k], xs[k]
        deg = 0
        for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            rr, cc = r + dr, c + dc
            if not (0 <= rr < h and 0 <= cc < w):
                continue
            deg += 1
            b[k] += src[r, c] - src[rr, cc]
            if mask[rr, cc]:
                A[k, idx[rr, cc]] = -1.0
            else:
                b[k] += bg[rr, cc]
        A[k, k] = deg
    f = scipy.sparse.linalg.spsolve(A.tocsr(), b)
    out = bg.astype(np.float64).copy()
    out[ys, xs] = f
    return out


def reference_canny(rgb: np.ndarray, sigma: float, low: float, high: float) -> np.ndarray:
    """OpenCV's Canny on an OpenCV Gaussian blur, same staging and scales."""
    import cv2

    gray = cv2.cvtColor(rgb[:, :, ::-1], cv2.COLOR_BGR2GRAY)
    radius = int(np.ceil(3.0 * sigma))
    k = 2 * radius + 1
    blurred = cv2.GaussianBlur(gray, (k, k), sigma)
    edges = cv2.Canny(blurred, low, high, L2gradient=True)
    return (edges > 0).astype(np.uint8)


def count_overlap_pixels(mask_list: list[np.ndarray]) -> tuple[int, int]:
    """Brute-force per-pixel scan: (pixels covered >= 2 times, total area)."""
    h, w = mask_list[0].shape
    overlap = 0
    total = 0
    for r in range(h):
        for c in range(w):
            cover = sum(int(m[r, c]) for m in mask_list)
            if cover >= 2:
                overlap += 1
            total += cover
    return overlap, total


def brute_force_boxes(masks: list[np.ndarray]) -> list[tuple[int, int, int, int] | None]:
    """Per-pixel scan for each mask's tight box as (x0, y0, x1, y1)."""
    out: list[tuple[int, int, int, int] | None] = []
    for m in masks:
        h, w = m.shape
        x0, y0, x1, y1 = w, h, -1, -1
        for r in range(h):
            for c in range(w):
                if m[r, c]:
                    x0 = min(x0, c)
                    y0 = min(y0, r)
                    x1 = max(x1, c + 1)
                    y1 = max(y1, r + 1)
        out.append(None if x1 < 0 else (x0, y0, x1, y1))
    return out
