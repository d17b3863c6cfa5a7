"""Exception hierarchy shared by all pectseg modules.

Every error raised by the library derives from :class:`PectsegError`.  The
pipeline attaches the name of the failing stage to the exception so batch
runners can report where a given image fell over.
"""

from __future__ import annotations


class PectsegError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, *, stage: str | None = None):
        super().__init__(message)
        self.stage = stage

    def __str__(self) -> str:
        base = super().__str__()
        if self.stage:
            return f"[{self.stage}] {base}"
        return base


class FormatError(PectsegError):
    """File does not follow the expected on-disk layout."""


class UnsupportedDepth(PectsegError):
    """PGM file with a maxval other than 255."""


class RangeError(PectsegError):
    """Probability raster contains values outside [0, 1]."""


class AmbiguousOrientation(PectsegError):
    """No corner of the image is clearly the brightest."""


class DegenerateHistogram(PectsegError):
    """Histogram collapses to a single bin; no threshold exists."""


class EmptyMask(PectsegError):
    """Operation requires at least one foreground pixel."""


class AmbiguousSkeleton(PectsegError):
    """Skeleton does not have exactly two endpoints."""


class ExtrapolationDiverged(PectsegError):
    """Fitted completion line never reaches the required image border."""


class ShapeError(PectsegError):
    """Rasters that must share dimensions do not."""


class NoPath(PectsegError):
    """Terminal pixels are not connected inside the mask."""


class OpenBoundary(PectsegError):
    """Boundary path does not touch both required image borders."""


class UndefinedMetric(PectsegError):
    """A metric denominator is zero for the given confusion counts."""


class InsufficientData(PectsegError):
    """Aggregation requires more samples than were provided."""


class BadSpec(PectsegError):
    """Phantom specification violates its invariants."""


class ManifestMismatch(PectsegError):
    """Prediction and ground-truth directories do not list the same files."""
