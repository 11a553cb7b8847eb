"""On-disk asset layout for the paste pipelines.

Cutouts live in per-class subdirectories of the cutout root: classes named
in the config are targets, any other subdirectory is a distractor class.
Each cutout is an RGBA PNG whose alpha channel is the mask. Backgrounds are
flat PNG/JPEG files in the background root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ConfigError, MissingAssetError
from ..imaging import Cutout, Image, Mask, extract_cutout, load_image

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass
class AssetStore:
    cutouts: dict[str, Cutout] = field(default_factory=dict)
    backgrounds: dict[str, Image] = field(default_factory=dict)
    target_refs: list[str] = field(default_factory=list)
    distractor_refs: list[str] = field(default_factory=list)

    def cutout(self, ref: str) -> Cutout:
        try:
            return self.cutouts[ref]
        except KeyError:
            raise MissingAssetError(f"no cutout {ref!r}") from None

    def background(self, ref: str) -> Image:
        try:
            return self.backgrounds[ref]
        except KeyError:
            raise MissingAssetError(f"no background {ref!r}") from None


def cutout_from_rgba(rgba: Image, class_label: int, instance_id: str) -> Cutout:
    """Tight cutout from an RGBA image whose alpha encodes the mask."""
    alpha = rgba.alpha()
    if alpha is None:
        raise MissingAssetError(f"cutout {instance_id!r} has no alpha channel")
    mask = Mask((alpha >= 128).astype(np.uint8))
    rgb = Image(np.ascontiguousarray(rgba.pixels[:, :, :3]))
    return extract_cutout(rgb, mask, class_label, instance_id)


def load_assets(
    cutouts_dir: str | Path,
    backgrounds_dir: str | Path,
    class_names: list[str],
) -> AssetStore:
    cutouts_dir = Path(cutouts_dir)
    backgrounds_dir = Path(backgrounds_dir)
    store = AssetStore()

    for class_dir in sorted(p for p in cutouts_dir.iterdir() if p.is_dir()):
        is_target = class_dir.name in class_names
        label = class_names.index(class_dir.name) if is_target else -1
        for f in sorted(class_dir.iterdir()):
            if f.suffix.lower() not in IMAGE_SUFFIXES:
                continue
            ref = f"{class_dir.name}/{f.name}"
            store.cutouts[ref] = cutout_from_rgba(load_image(f), label, ref)
            (store.target_refs if is_target else store.distractor_refs).append(ref)

    for f in sorted(backgrounds_dir.iterdir()):
        if f.suffix.lower() in IMAGE_SUFFIXES:
            img = load_image(f)
            if img.channels == 4:
                img = Image(np.ascontiguousarray(img.pixels[:, :, :3]))
            store.backgrounds[f.name] = img

    if not store.target_refs:
        raise ConfigError(f"no target cutouts under {cutouts_dir} for classes {class_names}")
    if not store.backgrounds:
        raise ConfigError(f"no backgrounds under {backgrounds_dir}")
    return store
