"""sRGB <-> CIELAB conversion (D65 white, 2-degree observer)."""

from __future__ import annotations

import numpy as np

# sRGB-to-XYZ linear transform (IEC 61966-2-1), D65.
_RGB2XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
_XYZ2RGB = np.linalg.inv(_RGB2XYZ)
_WHITE = _RGB2XYZ @ np.ones(3)  # D65 reference white in XYZ

_DELTA = 6.0 / 29.0


def _srgb_to_linear(u: np.ndarray) -> np.ndarray:
    return np.where(u <= 0.04045, u / 12.92, ((u + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return np.where(u <= 0.0031308, u * 12.92, 1.055 * u ** (1.0 / 2.4) - 0.055)


def _lab_f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA**3, np.cbrt(t), t / (3 * _DELTA**2) + 4.0 / 29.0)


def _lab_f_inv(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA, t**3, 3 * _DELTA**2 * (t - 4.0 / 29.0))


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """(..., 3) uint8 or 0-255 float sRGB -> (..., 3) float CIELAB."""
    lin = _srgb_to_linear(np.asarray(rgb, dtype=np.float64) / 255.0)
    xyz = lin @ _RGB2XYZ.T
    fxfyfz = _lab_f(xyz / _WHITE)
    lab = np.empty_like(fxfyfz)
    lab[..., 0] = 116.0 * fxfyfz[..., 1] - 16.0
    lab[..., 1] = 500.0 * (fxfyfz[..., 0] - fxfyfz[..., 1])
    lab[..., 2] = 200.0 * (fxfyfz[..., 1] - fxfyfz[..., 2])
    return lab


def lab_to_rgb(lab: np.ndarray) -> np.ndarray:
    """(..., 3) float CIELAB -> (..., 3) uint8 sRGB, clamped to gamut."""
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    xyz = np.stack([_lab_f_inv(fx), _lab_f_inv(fy), _lab_f_inv(fz)], axis=-1) * _WHITE
    lin = xyz @ _XYZ2RGB.T
    return np.clip(np.rint(_linear_to_srgb(lin) * 255.0), 0, 255).astype(np.uint8)
