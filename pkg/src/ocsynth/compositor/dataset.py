"""Batch Cut-Paste generation: images + YOLO labels + manifest."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image as PilImage

from ..boxes import to_yolo_line
from ..datatools.manifest import DatasetManifest, ManifestEntry, save_manifest
from ..errors import ConfigError, IoFailure
from ..imaging import Image, save_image
from .assets import AssetStore, load_assets
from .layout import sample_layout
from .render import render_composite
from .types import AnnotationSet, CutPasteConfig

log = logging.getLogger("ocsynth.compositor")


@dataclass(frozen=True)
class CutPasteDatasetConfig:
    cutouts_dir: str
    backgrounds_dir: str
    out_dir: str
    count: int
    class_names: list[str]
    frame_size: tuple[int, int] = (512, 512)
    layout: CutPasteConfig = field(default_factory=CutPasteConfig)

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError("count must be >= 1")
        if not self.class_names:
            raise ConfigError("class_names must be nonempty")
        if self.frame_size[0] < 1 or self.frame_size[1] < 1:
            raise ConfigError("frame_size must be positive")


def per_image_seed(run_seed: int, index: int) -> int:
    """Independent, reproducible per-image stream seed."""
    return int(np.random.SeedSequence((run_seed, index)).generate_state(1)[0])


def resize_background(image: Image, frame_size: tuple[int, int]) -> Image:
    if (image.width, image.height) == frame_size:
        return image
    pil = PilImage.fromarray(image.rgb()).resize(frame_size, PilImage.BILINEAR)
    return Image(np.asarray(pil, dtype=np.uint8).copy())


def write_yolo_labels(
    annotations: AnnotationSet, frame_size: tuple[int, int], path: Path
) -> None:
    lines = [
        to_yolo_line(e.class_label, e.box, frame_size[0], frame_size[1])
        for e in annotations.entries
    ]
    path.write_text("".join(line + "\n" for line in lines))


def generate_cutpaste_dataset(config: CutPasteDatasetConfig, rng_seed: int) -> DatasetManifest:
    assets = load_assets(config.cutouts_dir, config.backgrounds_dir, config.class_names)
    out_dir = Path(config.out_dir)
    try:
        (out_dir / "images").mkdir(parents=True, exist_ok=True)
        (out_dir / "labels").mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create output dirs under {out_dir}: {exc}") from exc

    manifest = generate_into_store(config, rng_seed, assets, out_dir)
    save_manifest(manifest, out_dir / "manifest.json")
    return manifest


def generate_into_store(
    config: CutPasteDatasetConfig,
    rng_seed: int,
    assets: AssetStore,
    out_dir: Path,
) -> DatasetManifest:
    targets = [assets.cutouts[r] for r in assets.target_refs]
    distractors = [assets.cutouts[r] for r in assets.distractor_refs]
    bg_refs = sorted(assets.backgrounds)
    resized: dict[str, Image] = {}

    entries = []
    class_counts: dict[str, int] = {}
    t0 = time.perf_counter()
    for i in range(config.count):
        seed = per_image_seed(rng_seed, i)
        bg_rng, layout_seed = split_image_seed(seed)
        bg_ref = bg_refs[int(bg_rng.integers(len(bg_refs)))]
        if bg_ref not in resized:
            resized[bg_ref] = resize_background(assets.backgrounds[bg_ref], config.frame_size)
        background = resized[bg_ref]

        layout = sample_layout(
            layout_seed, targets, distractors, background, config.layout, bg_ref
        )
        frame_assets = AssetStore(
            cutouts=assets.cutouts, backgrounds={bg_ref: background}
        )
        stem = f"{i:06d}"
        image, annotations = render_composite(layout, frame_assets, f"images/{stem}.png")
        save_image(image, out_dir / "images" / f"{stem}.png")
        write_yolo_labels(annotations, config.frame_size, out_dir / "labels" / f"{stem}.txt")
        entries.append(
            ManifestEntry(
                image=f"images/{stem}.png", label=f"labels/{stem}.txt", source="cutpaste"
            )
        )
        for e in annotations.entries:
            name = config.class_names[e.class_label]
            class_counts[name] = class_counts.get(name, 0) + 1

    elapsed = time.perf_counter() - t0
    log.info(
        "generated %d images in %.2fs (%.2f imgs/sec)",
        config.count, elapsed, config.count / elapsed if elapsed else float("inf"),
    )
    return DatasetManifest(tag="cutpaste", entries=tuple(entries), class_counts=class_counts)


def split_image_seed(seed: int) -> tuple[np.random.Generator, int]:
    """Independent background-choice stream and layout seed for one image."""
    children = np.random.SeedSequence(seed).spawn(2)
    bg_rng = np.random.Generator(np.random.PCG64(children[0]))
    layout_seed = int(children[1].generate_state(1)[0])
    return bg_rng, layout_seed
