"""Dataset splitting, mixing, and manifest plumbing."""

from .manifest import (
    SOURCE_TAGS,
    DatasetManifest,
    ManifestEntry,
    count_classes,
    load_manifest,
    save_manifest,
    validate_manifest,
)

__all__ = [
    "SOURCE_TAGS",
    "DatasetManifest",
    "ManifestEntry",
    "count_classes",
    "load_manifest",
    "save_manifest",
    "validate_manifest",
]
