"""Errors raised by the edge-network component."""


class CnnEdgeError(Exception):
    """Base class for all component errors."""


class FormatError(CnnEdgeError):
    """File does not follow the expected on-disk layout."""


class RangeError(CnnEdgeError):
    """Probability raster contains values outside [0, 1]."""


class ShapeError(CnnEdgeError):
    """Rasters that must share dimensions do not."""


class DegenerateLabels(CnnEdgeError):
    """Label mask is all-positive or all-negative; class weights undefined."""


class InsufficientData(CnnEdgeError):
    """Training corpus is too small."""
