"""Generation-backed synthesis: edge-conditioned backgrounds, originals pasted back."""

from .client import GenerationResult, request_generation
from .compose import composite_final
from .dataset import DiffusionDatasetConfig, generate_diffusion_dataset
from .mock import MockDiffusionService
from .payload import (
    ConditioningPayload,
    GenerationParams,
    arrangement_canvas,
    build_conditioning,
)
from .wire import parse_response, request_body

__all__ = [
    "ConditioningPayload",
    "DiffusionDatasetConfig",
    "GenerationParams",
    "GenerationResult",
    "MockDiffusionService",
    "arrangement_canvas",
    "build_conditioning",
    "composite_final",
    "generate_diffusion_dataset",
    "parse_response",
    "request_body",
    "request_generation",
]
