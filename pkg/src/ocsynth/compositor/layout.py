"""Layout sampling: rejection placement under occlusion constraints."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateScaleError, InfeasibleConfigError
from ..imaging import Cutout, Image, transform_mask
from .types import (
    ROLE_DISTRACTOR,
    ROLE_TARGET,
    CutPasteConfig,
    LayoutSpec,
    Placement2D,
)

MAX_LAYOUT_RESTARTS = 20

Window = tuple[int, int, int, int]  # r0, r1, c0, c1 in frame coordinates


def place_in_frame(
    mask: np.ndarray, position: tuple[int, int], frame_size: tuple[int, int]
) -> np.ndarray:
    """Boolean frame-shaped array of the mask pasted at (x, y), clipped."""
    fw, fh = frame_size
    x, y = position
    out = np.zeros((fh, fw), dtype=bool)
    clipped = _clip_window(mask, position, frame_size)
    if clipped is not None:
        (r0, r1, c0, c1), local = clipped
        out[r0:r1, c0:c1] = local
    return out


def _clip_window(
    mask: np.ndarray, position: tuple[int, int], frame_size: tuple[int, int]
) -> tuple[Window, np.ndarray] | None:
    fw, fh = frame_size
    x, y = position
    c0, r0 = max(x, 0), max(y, 0)
    c1 = min(x + mask.shape[1], fw)
    r1 = min(y + mask.shape[0], fh)
    if c0 >= c1 or r0 >= r1:
        return None
    return (r0, r1, c0, c1), mask[r0 - y : r1 - y, c0 - x : c1 - x].astype(bool)


def _intersect(a: Window, b: Window) -> Window | None:
    r0, r1 = max(a[0], b[0]), min(a[1], b[1])
    c0, c1 = max(a[2], b[2]), min(a[3], b[3])
    if r0 >= r1 or c0 >= c1:
        return None
    return r0, r1, c0, c1


def _local(w: Window, within: Window) -> tuple[slice, slice]:
    return slice(w[0] - within[0], w[1] - within[0]), slice(w[2] - within[2], w[3] - within[2])


@dataclass
class _Placed:
    placement: Placement2D
    full_area: int
    window: Window
    in_frame: np.ndarray   # local bool over window
    visible: np.ndarray    # local bool over window; shrinks as others land
    visible_count: int


def sample_layout(
    rng_seed: int,
    targets: Sequence[Cutout],
    distractors: Sequence[Cutout],
    background: Image,
    config: CutPasteConfig,
    background_ref: str = "",
) -> LayoutSpec:
    """Draw a constraint-satisfying layout over the background.

    Draw order (the determinism contract): object count, distractor count,
    cutout choices, paste order permutation, then per object rotation, width
    fraction, blend mode, and up to `attempts` positions. An object whose
    placement cannot satisfy the occlusion/visibility constraints after
    `attempts` tries is dropped. If a pass ends with zero targets placed the
    whole layout is resampled from the same stream; persistent failure
    raises InfeasibleConfig.
    """
    if not targets:
        raise InfeasibleConfigError("no target cutouts supplied")
    frame_size = (background.width, background.height)
    if frame_size[0] * frame_size[1] < config.min_visible_px:
        raise InfeasibleConfigError(
            f"min_visible_px {config.min_visible_px} exceeds frame area "
            f"{frame_size[0] * frame_size[1]}"
        )

    rng = np.random.default_rng(rng_seed)
    for _ in range(MAX_LAYOUT_RESTARTS):
        placed = _try_layout(rng, targets, distractors, frame_size, config)
        if any(p.placement.role == ROLE_TARGET for p in placed):
            return LayoutSpec(
                background_ref=background_ref,
                frame_size=frame_size,
                placements=tuple(p.placement for p in placed),
                rng_seed=rng_seed,
            )
    raise InfeasibleConfigError(
        f"no target placement found in {MAX_LAYOUT_RESTARTS} layout attempts"
    )


def _try_layout(
    rng: np.random.Generator,
    targets: Sequence[Cutout],
    distractors: Sequence[Cutout],
    frame_size: tuple[int, int],
    config: CutPasteConfig,
) -> list[_Placed]:
    fw, fh = frame_size
    n_targets = int(rng.integers(config.min_objects, config.max_objects + 1))
    n_distractors = (
        int(rng.integers(0, config.max_distractors + 1)) if distractors else 0
    )
    picks: list[tuple[Cutout, str]] = [
        (targets[int(i)], ROLE_TARGET)
        for i in rng.integers(0, len(targets), size=n_targets)
    ]
    if n_distractors:
        picks += [
            (distractors[int(i)], ROLE_DISTRACTOR)
            for i in rng.integers(0, len(distractors), size=n_distractors)
        ]
    order = rng.permutation(len(picks))

    placed: list[_Placed] = []
    for z, pick in enumerate(order):
        cutout, role = picks[int(pick)]
        rotation = float(rng.uniform(*config.rotation_range))
        frac = float(rng.uniform(config.min_frac, config.max_frac))
        scale = frac * fw / cutout.width
        blend_mode = str(rng.choice(config.blend_modes))
        try:
            mask = transform_mask(cutout, rotation, scale).data
        except DegenerateScaleError:
            continue
        th, tw = mask.shape
        full_area = int(mask.sum())

        for _ in range(config.attempts):
            x = int(rng.integers(-(tw // 2), fw - tw // 2 + 1))
            y = int(rng.integers(-(th // 2), fh - th // 2 + 1))
            commit = _check_placement(mask, (x, y), frame_size, full_area, role, placed, config)
            if commit is None:
                continue
            window, local = commit
            placed.append(
                _Placed(
                    placement=Placement2D(
                        cutout_ref=cutout.instance_id,
                        role=role,
                        position=(x, y),
                        rotation=rotation,
                        scale=scale,
                        blend_mode=blend_mode,
                        z_order=z,
                    ),
                    full_area=full_area,
                    window=window,
                    in_frame=local,
                    visible=local.copy(),
                    visible_count=int(local.sum()),
                )
            )
            break
    return placed


def _check_placement(
    mask: np.ndarray,
    position: tuple[int, int],
    frame_size: tuple[int, int],
    full_area: int,
    role: str,
    placed: list[_Placed],
    config: CutPasteConfig,
):
    """None on constraint violation; else commits prior-visibility updates
    and returns (window, local mask, per-prior hidden bookkeeping)."""
    clipped = _clip_window(mask, position, frame_size)
    if clipped is None:
        return None
    window, local = clipped
    visible_px = int(local.sum())
    if visible_px == 0:
        return None
    # the candidate goes on top: its own occlusion is pure truncation
    if 1.0 - visible_px / full_area > config.max_occlusion:
        return None
    if role == ROLE_TARGET and visible_px < config.min_visible_px:
        return None

    updates = []  # (prior, prior-local slices, boolean patch to clear)
    for prior in placed:
        inter = _intersect(window, prior.window)
        if inter is None:
            continue
        cand_sub = local[_local(inter, window)]
        prior_sl = _local(inter, prior.window)
        newly_hidden = int((cand_sub & prior.visible[prior_sl]).sum())
        if newly_hidden == 0:
            continue
        remaining = prior.visible_count - newly_hidden
        if 1.0 - remaining / prior.full_area > config.max_occlusion:
            return None
        if prior.placement.role == ROLE_TARGET and remaining < config.min_visible_px:
            return None
        updates.append((prior, prior_sl, cand_sub, newly_hidden))

    for prior, prior_sl, cand_sub, newly_hidden in updates:
        prior.visible[prior_sl] &= ~cand_sub
        prior.visible_count -= newly_hidden
    return window, local
