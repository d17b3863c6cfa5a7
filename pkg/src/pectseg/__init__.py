"""Pectoral-muscle boundary reconstruction for MLO mammograms.

A two-stage recipe: a pair of CNN edge-probability maps (coarse and fine)
is turned into a working edge mask by thresholding, pruning, and -- when
the mask stops short of the image borders -- linear extrapolation; the
single-pixel boundary is then recovered as the minimal-cost path on a
weighted pixel graph restricted to that mask, and flood-filled into
pectoral and breast masks that a metrics module can score against ground
truth.  A phantom generator provides synthetic images with exact ground
truth for desk-scale testing.
"""

from .boundary_graph import GraphConfig, PixelPath, edge_weight, select_terminals, shortest_path
from .errors import PectsegError
from .metrics import ConfusionCounts, MetricsReport, aggregate, compute_metrics, confusion
from .morphology import (
    CompletionParams,
    SkeletonInfo,
    binarize,
    complete_mask,
    is_disconnected,
    longest_component,
    otsu_threshold,
    skeletonize,
)
from .phantom import PhantomSpec, boundary_distance, generate, scenario_spec
from .pipeline import (
    PipelineConfig,
    SegmentationResult,
    breast_foreground,
    fuse,
    mask_from_boundary,
    segment,
)
from .raster_io import (
    Orientation,
    apply_orientation,
    detect_orientation,
    read_gray_image,
    read_mask,
    read_prob_map,
    write_gray_image,
    write_mask,
    write_prob_map,
)

__version__ = "0.1.0"
