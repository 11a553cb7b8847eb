"""Exception hierarchy for the synthesis engine.

Every operation raises a subclass of :class:`OcsynthError`, so callers (in
particular the CLI) can map failures to exit categories without string
matching.
"""

from __future__ import annotations


class OcsynthError(Exception):
    """Base class for all engine errors."""


class ConfigError(OcsynthError):
    """Invalid, unknown, or missing configuration."""


class IoFailure(OcsynthError):
    """Filesystem or codec failure while reading/writing artifacts."""


class ServiceError(OcsynthError):
    """Base class for external generation-service failures."""


# --- imaging ---------------------------------------------------------------

class EmptyMaskError(OcsynthError):
    """Mask has zero set pixels."""


class DimensionMismatchError(OcsynthError):
    """Two rasters that must share dimensions do not."""


class DegenerateScaleError(OcsynthError):
    """A geometric transform collapsed a cutout below 1x1 pixels."""


class InvalidThresholdsError(OcsynthError):
    """Edge-detector thresholds violate low < high."""


class NoOverlapError(OcsynthError):
    """A paste lies entirely outside the background frame."""


class EmptyRingError(OcsynthError):
    """Harmonization ring around a region contains no pixels."""


class EmptyInputError(OcsynthError):
    """An operation over a collection received nothing usable."""


# --- compositor ------------------------------------------------------------

class InfeasibleConfigError(OcsynthError):
    """Layout constraints can never be satisfied for the given assets."""


class MissingAssetError(OcsynthError):
    """A layout or scene references an asset that cannot be resolved."""


# --- diffusion service -----------------------------------------------------

class ServiceTimeout(ServiceError):
    """The generation service did not answer within the deadline."""


class ProtocolError(ServiceError):
    """The service answered with a non-conforming response."""


class ServiceRejection(ServiceError):
    """The service rejected the payload (4xx-class); never retried."""


# --- scene planning --------------------------------------------------------

class AllMissingError(OcsynthError):
    """A depth image contains no valid samples."""


class UnorganizedCloudError(OcsynthError):
    """Plane detection needs a cloud with per-point pixel origins."""


class NoHorizontalPlaneError(OcsynthError):
    """No detected plane is horizontal within the angle threshold."""


class EmptySceneError(OcsynthError):
    """Scene planning placed zero objects."""


# --- dataset tools ---------------------------------------------------------

class EmptyRealSubsetError(OcsynthError):
    """The requested real-data fraction rounds down to zero images."""


class InsufficientEntriesError(OcsynthError):
    """A manifest does not hold enough entries for the requested sample."""


# --- evaluation ------------------------------------------------------------

class NoGroundTruthError(OcsynthError):
    """AP requested for a class with no ground-truth boxes."""
