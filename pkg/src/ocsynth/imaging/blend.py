"""Pasting a cutout onto a background: direct, feathered, gradient-domain.

All three modes share the same geometry: the cutout's top-left corner lands
at ``position`` (x, y), possibly negative or past the frame so the paste is
truncated; only the overlapping window is touched.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..errors import NoOverlapError
from .core import Cutout, Image

FEATHER_BAND_PX = 5
DEFAULT_FEATHER_SIGMA = 2.0
GS_MAX_ITERS = 10_000
GS_RESIDUAL_TOL = 0.5  # intensity levels, max-norm

BLEND_MODES = ("direct", "feathered", "gradient_domain")


def _overlap_window(
    background: Image, cutout: Cutout, position: tuple[int, int]
) -> tuple[slice, slice, slice, slice]:
    """(bg_rows, bg_cols, cut_rows, cut_cols) of the clipped paste window."""
    x, y = position
    bx0, by0 = max(x, 0), max(y, 0)
    bx1 = min(x + cutout.width, background.width)
    by1 = min(y + cutout.height, background.height)
    if bx0 >= bx1 or by0 >= by1:
        raise NoOverlapError(
            f"paste at ({x}, {y}) of {cutout.width}x{cutout.height} misses "
            f"{background.width}x{background.height} frame"
        )
    return (
        slice(by0, by1),
        slice(bx0, bx1),
        slice(by0 - y, by1 - y),
        slice(bx0 - x, bx1 - x),
    )


def paste_mask_window(
    background: Image, cutout: Cutout, position: tuple[int, int]
) -> tuple[slice, slice, np.ndarray]:
    """Background window slices plus the cutout mask clipped to them."""
    br, bc, cr, cc = _overlap_window(background, cutout, position)
    return br, bc, cutout.mask.data[cr, cc]


def blend_paste(
    background: Image,
    cutout: Cutout,
    position: tuple[int, int],
    mode: str = "direct",
    feather_sigma: float = DEFAULT_FEATHER_SIGMA,
) -> Image:
    """Return a new image with the cutout composited at ``position`` (x, y)."""
    if mode not in BLEND_MODES:
        raise ValueError(f"unknown blend mode {mode!r}; expected one of {BLEND_MODES}")
    br, bc, cr, cc = _overlap_window(background, cutout, position)
    out = background.rgb().copy()
    src = cutout.image.pixels[cr, cc, :3]
    mask = cutout.mask.data[cr, cc].astype(bool)

    if mode == "direct":
        window = out[br, bc]
        window[mask] = src[mask]
    elif mode == "feathered":
        alpha = _feathered_alpha(mask, feather_sigma)
        window = out[br, bc].astype(np.float64)
        blended = alpha[:, :, None] * src.astype(np.float64) + (1.0 - alpha[:, :, None]) * window
        out[br, bc] = np.clip(np.rint(blended), 0, 255).astype(np.uint8)
    else:
        bg_ext, src_ext, mask_ext, ext_rows, ext_cols = _extended_window(
            background, src, mask, br, bc
        )
        solved = _poisson_window(bg_ext, src_ext, mask_ext)
        window = out[ext_rows, ext_cols]
        window[mask_ext] = np.clip(np.rint(solved[mask_ext]), 0, 255).astype(np.uint8)
    return Image(out)


def _extended_window(
    background: Image,
    src: np.ndarray,
    mask: np.ndarray,
    br: slice,
    bc: slice,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, slice, slice]:
    """Paste window grown by one background ring (clamped to the frame).

    The ring supplies Dirichlet values for mask pixels on the paste edge;
    the source is edge-replicated onto it so its gradient across the paste
    edge is zero. Where the frame itself cuts the ring off, the affected
    equations simply lose that neighbor term.
    """
    h, w = background.height, background.width
    ey0, ey1 = max(br.start - 1, 0), min(br.stop + 1, h)
    ex0, ex1 = max(bc.start - 1, 0), min(bc.stop + 1, w)
    top, bottom = br.start - ey0, ey1 - br.stop
    left, right = bc.start - ex0, ex1 - bc.stop

    bg_ext = background.rgb()[ey0:ey1, ex0:ex1].astype(np.float64)
    src_ext = np.pad(
        src.astype(np.float64), ((top, bottom), (left, right), (0, 0)), mode="edge"
    )
    mask_ext = np.pad(mask, ((top, bottom), (left, right)), mode="constant")
    return bg_ext, src_ext, mask_ext, slice(ey0, ey1), slice(ex0, ex1)


def _feathered_alpha(mask: np.ndarray, sigma: float) -> np.ndarray:
    """Binary alpha softened by a Gaussian, but only inside a 5-px band
    around the mask boundary; farther pixels keep their hard 0/1 value."""
    alpha = mask.astype(np.float64)
    soft = ndimage.gaussian_filter(alpha, sigma=sigma, mode="constant", cval=0.0)
    ball = ndimage.generate_binary_structure(2, 2)  # chebyshev ball
    inner = ndimage.binary_erosion(mask, ball, iterations=FEATHER_BAND_PX, border_value=1)
    outer = ndimage.binary_dilation(mask, ball, iterations=FEATHER_BAND_PX)
    band = outer & ~inner
    return np.where(band, soft, alpha)


# --- gradient-domain (Poisson) core ------------------------------------------

def _poisson_window(
    bg: np.ndarray, src: np.ndarray, mask: np.ndarray
) -> np.ndarray:
    """Solve the seamless-cloning Poisson system over the mask region.

    Unknowns are the mask pixels; Dirichlet values come from background
    pixels just outside the mask. Source gradients drive the interior. Mask
    pixels on the window border simply lose the out-of-window neighbor terms
    (their equation degree shrinks). Red-black Gauss-Seidel smoothing inside
    multigrid V-cycles, run to a residual max-norm well under the 0.5-level
    contract so the solution itself (not just the residual) is within a
    level of the true solve. All channels share one geometry and solve
    together.
    """
    inm = mask.astype(bool)
    if not inm.any():
        return bg.copy()
    h, w = inm.shape

    # Work on the mask's bounding box plus one ring of context, clamped.
    rows = np.flatnonzero(inm.any(axis=1))
    cols = np.flatnonzero(inm.any(axis=0))
    pr0, pr1 = max(rows[0] - 1, 0), min(rows[-1] + 2, h)
    pc0, pc1 = max(cols[0] - 1, 0), min(cols[-1] + 2, w)
    sub = (slice(pr0, pr1), slice(pc0, pc1))

    f = _solve_poisson_region(bg[sub], src[sub], inm[sub])
    out = bg.copy()
    out[sub][inm[sub]] = f[inm[sub]]
    return out


def _shifted(a: np.ndarray, dr: int, dc: int, fill) -> np.ndarray:
    """a translated by (dr, dc) with `fill` where the source runs out."""
    h, w = a.shape[:2]
    out = np.full_like(a, fill)
    rs_dst = slice(max(dr, 0), h + min(dr, 0))
    cs_dst = slice(max(dc, 0), w + min(dc, 0))
    rs_src = slice(max(-dr, 0), h + min(-dr, 0))
    cs_src = slice(max(-dc, 0), w + min(-dc, 0))
    out[rs_dst, cs_dst] = a[rs_src, cs_src]
    return out


def _region_system(
    bg: np.ndarray, src: np.ndarray, mask: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel degree and constant term b of the Poisson system.

    For unknown p: deg(p)*f(p) - sum_{q in N4(p) & mask} f(q) = b(p), where
    b(p) = sum_{q in N4(p), q outside mask but in window} bg(q)
         + sum_{q in N4(p) in window} (src(p) - src(q)),
    and deg(p) counts in-window 4-neighbors. bg/src may carry a trailing
    channel axis; b then carries it too while deg stays two-dimensional.
    """
    h, w = mask.shape
    inm = mask.astype(bool)
    deg = np.zeros((h, w))
    b = np.zeros_like(src, dtype=np.float64)
    planar = (slice(None),) if src.ndim == 2 else (slice(None), slice(None), None)

    for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        exists = _shifted(np.ones((h, w), dtype=bool), dr, dc, False)
        nb_src = _shifted(src, dr, dc, 0.0)
        nb_bg = _shifted(bg, dr, dc, 0.0)
        nb_in_mask = _shifted(inm, dr, dc, False)
        deg += exists
        grad = np.where(exists[planar], src - nb_src, 0.0)
        dirichlet = np.where((exists & ~nb_in_mask)[planar], nb_bg, 0.0)
        b += grad + dirichlet
    deg[~inm] = 0.0
    b[~inm] = 0.0
    return deg, b


MG_MIN_DIM = 16        # grids smaller than this relax directly
MG_PRE_SWEEPS = 2
MG_POST_SWEEPS = 2
MG_COARSEST_SWEEPS = 100  # the bottom level is solved, not just smoothed


class _Level:
    """One grid level of the masked Poisson system: operator + smoother.

    The value arrays may carry a trailing channel axis; the geometry (mask,
    degree, red-black coloring) is shared across channels. Every field
    array handled here is kept identically zero outside the mask — that
    invariant lets neighbor_sum skip masking entirely, since Dirichlet
    contributions live in b, not in the field.
    """

    def __init__(self, deg: np.ndarray, inm: np.ndarray, channels: bool):
        rr, cc = np.indices(inm.shape)
        planar = (slice(None), slice(None), None) if channels else (slice(None),)
        self.inm = inm
        self.inm_p = inm[planar]
        self.deg_p = deg[planar]
        safe = np.where(deg > 0, deg, 1.0)
        self.inv_deg_p = np.where(deg > 0, 1.0 / safe, 0.0)[planar]
        self.red_p = (((rr + cc) % 2 == 0) & inm)[planar]
        self.black_p = (((rr + cc) % 2 == 1) & inm)[planar]
        self.coarse: _Level | None = None  # set by _hierarchy

    @staticmethod
    def neighbor_sum(f: np.ndarray) -> np.ndarray:
        s = np.zeros_like(f)
        s[:-1] += f[1:]
        s[1:] += f[:-1]
        s[:, :-1] += f[:, 1:]
        s[:, 1:] += f[:, :-1]
        return s

    def relax(self, f: np.ndarray, b: np.ndarray, sweeps: int) -> np.ndarray:
        for _ in range(sweeps):
            upd = (self.neighbor_sum(f) + b) * self.inv_deg_p
            np.copyto(f, upd, where=self.red_p)
            upd = (self.neighbor_sum(f) + b) * self.inv_deg_p
            np.copyto(f, upd, where=self.black_p)
        return f

    def residual(self, f: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.where(self.inm_p, b + self.neighbor_sum(f) - self.deg_p * f, 0.0)


def _hierarchy(deg: np.ndarray, inm: np.ndarray, channels: bool) -> _Level:
    """Chain of coarsened levels, assembled once per solve."""
    top = _Level(deg, inm, channels)
    lvl = top
    while min(lvl.inm.shape) >= MG_MIN_DIM:
        h, w = lvl.inm.shape
        ch, cw = (h + 1) // 2, (w + 1) // 2
        c_mask = _coarse_error_mask(lvl.inm, (ch, cw))
        if not c_mask.any():
            break
        c_deg, _ = _region_system(np.zeros((ch, cw)), np.zeros((ch, cw)), c_mask)
        lvl.coarse = _Level(c_deg, c_mask, channels)
        lvl = lvl.coarse
    return top


def _restrict_fw(r: np.ndarray, cshape: tuple[int, int]) -> np.ndarray:
    """Full-weighting restriction onto the vertex-aligned coarse grid
    (coarse (I, J) sits on fine (2I, 2J)). The 1/4-1/8-1/16 stencil
    annihilates the checkerboard mode that red-black relaxation leaves in
    the residual; sampling it raw would alias into a spurious smooth
    right side that the coarse solve then amplifies."""
    ch, cw = cshape
    pad = ((1, 1), (1, 1)) + ((0, 0),) * (r.ndim - 2)
    rp = np.pad(r, pad)

    def g(dr: int, dc: int) -> np.ndarray:
        return rp[1 + dr : 2 * ch + dr : 2, 1 + dc : 2 * cw + dc : 2]

    return (
        g(0, 0) / 4.0
        + (g(-1, 0) + g(1, 0) + g(0, -1) + g(0, 1)) / 8.0
        + (g(-1, -1) + g(-1, 1) + g(1, -1) + g(1, 1)) / 16.0
    )


def _prolong(e: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Bilinear interpolation from the vertex-aligned coarse grid: fine
    (2I, 2J) copies coarse (I, J), odd rows/columns average neighbors."""
    h, w = shape
    ch, cw = e.shape[:2]
    trail = e.ndim - 2
    fr = np.minimum(np.arange(h) / 2.0, ch - 1.0)
    fc = np.minimum(np.arange(w) / 2.0, cw - 1.0)
    r0 = np.floor(fr).astype(int)
    c0 = np.floor(fc).astype(int)
    r1 = np.minimum(r0 + 1, ch - 1)
    c1 = np.minimum(c0 + 1, cw - 1)
    wr = (fr - r0).reshape(h, 1, *([1] * trail))
    wc = (fc - c0).reshape(1, w, *([1] * trail))
    top = e[r0][:, c0] * (1.0 - wc) + e[r0][:, c1] * wc
    bot = e[r1][:, c0] * (1.0 - wc) + e[r1][:, c1] * wc
    return top * (1.0 - wr) + bot * wr


def _coarse_error_mask(inm: np.ndarray, cshape: tuple[int, int]) -> np.ndarray:
    """Coarse unknowns only where the full fine stencil is inside the mask.

    Vertices within one pixel of an in-window Dirichlet boundary are
    excluded: the spacing-2 coarse stencil cannot see a wall half a cell
    away, and treating such a vertex as free diverges while pinning it to
    zero merely slows the cycle. Window edges stay (border_value=1) — the
    fine problem is degree-reduced there, so the coarse rediscretization's
    matching reduction is the right picture. Thin structures fall to the
    smoother, which handles them quickly."""
    ch, cw = cshape
    ball = ndimage.generate_binary_structure(2, 2)
    eroded = ndimage.binary_erosion(inm, ball, border_value=1)
    return eroded[0 : 2 * ch : 2, 0 : 2 * cw : 2]


def _vcycle(level: _Level, f: np.ndarray, b: np.ndarray) -> np.ndarray:
    """One multigrid V-cycle: Gauss-Seidel smoothing plus a coarse-grid
    correction solving the rediscretized error equation with zero Dirichlet
    data. Red-black relaxation kills the high-frequency error; the recursion
    handles the smooth components a fixed sweep count cannot reach."""
    c = level.coarse
    if c is None:
        return level.relax(f, b, MG_COARSEST_SWEEPS)

    f = level.relax(f, b, MG_PRE_SWEEPS)
    # The stencil carries no grid spacing, so halving the resolution
    # scales the error equation's right side by the h^2 ratio of 4.
    c_b = np.where(
        c.inm_p, 4.0 * _restrict_fw(level.residual(f, b), c.inm.shape), 0.0
    )
    e = _vcycle(c, np.zeros_like(c_b), c_b)
    f += np.where(level.inm_p, _prolong(e, level.inm.shape), 0.0)
    return level.relax(f, b, MG_POST_SWEEPS)


def _solve_poisson_region(bg: np.ndarray, src: np.ndarray, mask: np.ndarray) -> np.ndarray:
    h, w = mask.shape
    inm = mask.astype(bool)
    channels = src.ndim == 3

    deg, b = _region_system(bg, src, mask)
    # Residual target: 0.5 levels is the contract; we also divide by a bound
    # on the inverse-operator norm so the *solution* error stays under a
    # level (||A^-1||_inf <= (min(m,n)+1)^2 / 8 for the grid Laplacian).
    inv_norm_bound = (min(h, w) + 1) ** 2 / 8.0
    tol = min(GS_RESIDUAL_TOL, 0.5 / inv_norm_bound)

    level = _hierarchy(deg, inm, channels)
    f = np.where(level.inm_p, src.astype(np.float64), 0.0)
    sweeps_per_cycle = MG_PRE_SWEEPS + MG_POST_SWEEPS
    for _ in range(max(GS_MAX_ITERS // sweeps_per_cycle, 1)):
        f = _vcycle(level, f, b)
        if np.abs(level.residual(f, b)).max() <= tol:
            break
    return f
