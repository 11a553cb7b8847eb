"""Dataset manifests: the unit every generator emits and every mixer eats."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import IoFailure

SOURCE_TAGS = ("real", "cutpaste", "diffusion_cp", "3drp", "3dcp")


@dataclass(frozen=True)
class ManifestEntry:
    image: str  # path relative to the manifest's directory
    label: str
    source: str

    def __post_init__(self) -> None:
        if self.source not in SOURCE_TAGS:
            raise ValueError(f"unknown source tag {self.source!r}")


@dataclass(frozen=True)
class DatasetManifest:
    tag: str
    entries: tuple[ManifestEntry, ...]
    class_counts: dict[str, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)


def count_classes(entries: list[ManifestEntry], root: Path, class_names: list[str]) -> dict[str, int]:
    counts: Counter[str] = Counter()
    for e in entries:
        text = (root / e.label).read_text()
        for line in text.splitlines():
            if line.strip():
                idx = int(line.split()[0])
                counts[class_names[idx]] += 1
    return dict(counts)


def save_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    doc = {
        "tag": manifest.tag,
        "entries": [
            {"image": e.image, "label": e.label, "source": e.source}
            for e in manifest.entries
        ],
        "class_counts": manifest.class_counts,
    }
    try:
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write manifest {path}: {exc}") from exc


def load_manifest(path: str | Path) -> DatasetManifest:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise IoFailure(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise IoFailure(f"manifest {path} is not valid JSON: {exc}") from exc
    return DatasetManifest(
        tag=doc["tag"],
        entries=tuple(
            ManifestEntry(image=e["image"], label=e["label"], source=e["source"])
            for e in doc["entries"]
        ),
        class_counts={k: int(v) for k, v in doc.get("class_counts", {}).items()},
    )


def validate_manifest(manifest: DatasetManifest, root: str | Path) -> list[str]:
    """Missing-file problems, empty when the manifest is sound."""
    root = Path(root)
    problems = []
    for e in manifest.entries:
        if not (root / e.image).is_file():
            problems.append(f"missing image {e.image}")
        if not (root / e.label).is_file():
            problems.append(f"missing label {e.label}")
    return problems
