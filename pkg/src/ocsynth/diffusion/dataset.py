"""Batch generation against the diffusion service.

Per image: sample a layout exactly as Cut-Paste would, stage it for edge
conditioning, fetch a generated background, paste the originals back, and
harmonize. Up to ``workers`` images are in flight at once (the service call
dominates); everything around the call is pure, and results are written by
index, so outputs are byte-identical regardless of completion order.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from ..compositor import (
    CutPasteConfig,
    load_assets,
    per_image_seed,
    resize_background,
    sample_layout,
    write_yolo_labels,
)
from ..compositor.dataset import split_image_seed
from ..datatools.manifest import DatasetManifest, ManifestEntry, save_manifest
from ..errors import ConfigError, IoFailure
from ..imaging import save_image
from ..imaging.edges import DEFAULT_HIGH, DEFAULT_LOW, DEFAULT_SIGMA
from .client import request_generation
from .compose import composite_final
from .payload import GenerationParams, build_conditioning

log = logging.getLogger("ocsynth.diffusion")

DEFAULT_WORKERS = 4


@dataclass(frozen=True)
class DiffusionDatasetConfig:
    cutouts_dir: str
    backgrounds_dir: str
    out_dir: str
    count: int
    class_names: list[str]
    endpoint: str
    frame_size: tuple[int, int] = (512, 512)
    layout: CutPasteConfig = field(default_factory=CutPasteConfig)
    params: GenerationParams = field(default_factory=GenerationParams)
    edge_sigma: float = DEFAULT_SIGMA
    edge_low: float = DEFAULT_LOW
    edge_high: float = DEFAULT_HIGH
    timeout: float = 60.0
    retries: int = 3
    workers: int = DEFAULT_WORKERS

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError("count must be >= 1")
        if not self.class_names:
            raise ConfigError("class_names must be nonempty")
        if self.frame_size[0] < 1 or self.frame_size[1] < 1:
            raise ConfigError("frame_size must be positive")
        if not self.endpoint:
            raise ConfigError("endpoint must be set")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.retries < 0:
            raise ConfigError("retries must be >= 0")


def generate_diffusion_dataset(
    config: DiffusionDatasetConfig, rng_seed: int
) -> DatasetManifest:
    assets = load_assets(config.cutouts_dir, config.backgrounds_dir, config.class_names)
    out_dir = Path(config.out_dir)
    try:
        (out_dir / "images").mkdir(parents=True, exist_ok=True)
        (out_dir / "labels").mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoFailure(f"cannot create output dirs under {out_dir}: {exc}") from exc

    targets = [assets.cutouts[r] for r in assets.target_refs]
    distractors = [assets.cutouts[r] for r in assets.distractor_refs]
    bg_refs = sorted(assets.backgrounds)
    resized = {
        ref: resize_background(assets.backgrounds[ref], config.frame_size)
        for ref in bg_refs
    }

    def make_one(index: int) -> tuple[ManifestEntry, dict[str, int]]:
        seed = per_image_seed(rng_seed, index)
        bg_rng, layout_seed = split_image_seed(seed)
        bg_ref = bg_refs[int(bg_rng.integers(len(bg_refs)))]
        background = resized[bg_ref]

        layout = sample_layout(
            layout_seed, targets, distractors, background, config.layout, bg_ref
        )
        payload = build_conditioning(
            layout,
            assets,
            background,
            config.params,
            seed,
            sigma=config.edge_sigma,
            low=config.edge_low,
            high=config.edge_high,
        )
        result = request_generation(
            config.endpoint, payload, timeout=config.timeout, retries=config.retries
        )
        image, annotations = composite_final(result.image, layout, assets)

        stem = f"{index:06d}"
        save_image(image, out_dir / "images" / f"{stem}.png")
        write_yolo_labels(
            annotations, config.frame_size, out_dir / "labels" / f"{stem}.txt"
        )
        counts: dict[str, int] = {}
        for e in annotations.entries:
            name = config.class_names[e.class_label]
            counts[name] = counts.get(name, 0) + 1
        entry = ManifestEntry(
            image=f"images/{stem}.png", label=f"labels/{stem}.txt", source="diffusion_cp"
        )
        return entry, counts

    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        results = list(pool.map(make_one, range(config.count)))
    elapsed = time.perf_counter() - t0
    log.info(
        "generated %d images in %.2fs (%.2f imgs/sec)",
        config.count, elapsed, config.count / elapsed if elapsed else float("inf"),
    )

    entries = tuple(entry for entry, _ in results)
    class_counts: dict[str, int] = {}
    for _, counts in results:
        for name, n in counts.items():
            class_counts[name] = class_counts.get(name, 0) + n
    manifest = DatasetManifest(
        tag="diffusion_cp", entries=entries, class_counts=class_counts
    )
    save_manifest(manifest, out_dir / "manifest.json")
    return manifest
