"""End-to-end boundary reconstruction from a pair of edge-probability maps.

The stages, all in the canonical frame (pectoral at the lower left):
threshold the coarse map, keep its largest component, complete it toward
the image borders if it stops short, gate the probability map with the
completed mask, run the minimal-path search between the skeleton
endpoints, and flood-fill the lower-left side of the path into the
pectoral mask.  Results are mapped back to the original image frame.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import morphology
from .boundary_graph import GraphConfig, PixelPath, select_terminals, shortest_path
from .errors import (
    DegenerateHistogram,
    OpenBoundary,
    PectsegError,
    ShapeError,
)
from .morphology import CompletionParams
from .raster_io import apply_orientation, detect_orientation

__all__ = [
    "PipelineConfig",
    "SegmentationResult",
    "fuse",
    "segment",
    "mask_from_boundary",
    "breast_foreground",
]

_FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for one segmentation run.

    ``fusion_source`` picks which probability map the mask gates: the
    coarse map (default, the literal recipe) or the fine one, which can
    steer the path more precisely once the mask has suppressed its
    clutter.  ``threshold_override`` skips Otsu when set.
    """

    fusion_source: str = "out2"
    completion: CompletionParams = field(default_factory=CompletionParams)
    graph: GraphConfig = field(default_factory=GraphConfig)
    threshold_override: float | None = None

    def __post_init__(self):
        if self.fusion_source not in ("out1", "out2"):
            raise ValueError("fusion_source must be 'out1' or 'out2'")
        if self.threshold_override is not None and not 0.0 <= self.threshold_override <= 1.0:
            raise ValueError("threshold_override outside [0, 1]")


@dataclass(frozen=True)
class SegmentationResult:
    """Boundary path and masks in the original image frame, plus the run
    report: a flat mapping of stage outcomes (threshold used, completion
    flags, orientation, path cost, ...) with deterministic formatting."""

    boundary: PixelPath
    pectoral_mask: np.ndarray
    breast_mask: np.ndarray
    run_report: dict[str, str]


@contextmanager
def _stage(name: str):
    try:
        yield
    except PectsegError as err:
        if err.stage is None:
            err.stage = name
        raise


def fuse(B, out1, out2, cfg: PipelineConfig = PipelineConfig(), added=None) -> np.ndarray:
    """Gate the source probability map with the mask: M = B * source.

    ``added`` marks pixels introduced by mask completion; those carry the
    mean probability of the original band so extrapolated corridors stay
    traversable at average cost instead of the near-infinite cost a zero
    probability would give them.
    """
    B = np.asarray(B, dtype=bool)
    out1 = np.asarray(out1, dtype=np.float32)
    out2 = np.asarray(out2, dtype=np.float32)
    if not (B.shape == out1.shape == out2.shape):
        raise ShapeError(
            f"raster shapes differ: {B.shape}, {out1.shape}, {out2.shape}"
        )
    source = out2 if cfg.fusion_source == "out2" else out1
    fused = np.where(B, source, np.float32(0.0)).astype(np.float32)
    if added is not None:
        added = np.asarray(added, dtype=bool) & B
        original = B & ~added
        if added.any():
            fill = float(source[original].mean()) if original.any() else 0.0
            fused[added] = np.float32(fill)
    return fused


def mask_from_boundary(path: PixelPath, width: int, height: int):
    """Split the raster into pectoral and breast-side regions along a path.

    The path must run from column 0 to the last row.  The pectoral mask is
    the 4-connected flood fill from the lower-left corner pixel bounded by
    the path, with the path pixels themselves counted as pectoral; the
    breast region is the complement.
    """
    nodes = list(path.nodes)
    if not nodes:
        raise OpenBoundary("empty boundary path")
    rows = np.array([p[0] for p in nodes])
    cols = np.array([p[1] for p in nodes])
    if rows.min() < 0 or rows.max() >= height or cols.min() < 0 or cols.max() >= width:
        raise OpenBoundary("boundary path leaves the raster")
    if not (cols == 0).any() or not (rows == height - 1).any():
        raise OpenBoundary("boundary path does not touch column 0 and the last row")
    on_path = np.zeros((height, width), dtype=bool)
    on_path[rows, cols] = True
    corner = (height - 1, 0)
    pectoral = on_path.copy()
    if not on_path[corner]:
        labels, _ = ndimage.label(~on_path, structure=_FOUR)
        pectoral |= labels == labels[corner]
    return pectoral, ~pectoral


def breast_foreground(image) -> np.ndarray:
    """Breast-tissue foreground of a gray image.

    Otsu on the intensity histogram, largest 8-connected component, holes
    filled.  The metrics-facing breast mask is this region minus the
    pectoral mask.
    """
    image = np.asarray(image, dtype=np.uint8)
    level = morphology.otsu_threshold_u8(image)
    fg = image > level
    if not fg.any():
        raise DegenerateHistogram("no pixel above the Otsu level")
    fg = morphology.longest_component(fg)
    return ndimage.binary_fill_holes(fg)


def _erase_loops(nodes: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Drop any cycles from a walk so the result is a simple path."""
    seen: dict[tuple[int, int], int] = {}
    out: list[tuple[int, int]] = []
    for node in nodes:
        if node in seen:
            del_from = seen[node] + 1
            for dropped in out[del_from:]:
                del seen[dropped]
            del out[del_from:]
        else:
            seen[node] = len(out)
            out.append(node)
    return out


def _bridge_to_border(M, B, node, side, cfg: GraphConfig) -> list[tuple[int, int]]:
    """Minimal-path segment inside B from `node` to the nearest mask pixel
    on the required border (column 0 for 'left', last row for 'bottom')."""
    B = np.asarray(B, dtype=bool)
    h, w = B.shape
    if side == "left":
        if node[1] == 0:
            return [node]
        rows = np.flatnonzero(B[:, 0])
        targets = [(int(r), 0) for r in rows]
        key = lambda t: (abs(t[0] - node[0]), t[0])
    else:
        if node[0] == h - 1:
            return [node]
        cols = np.flatnonzero(B[h - 1, :])
        targets = [(h - 1, int(c)) for c in cols]
        key = lambda t: (abs(t[1] - node[1]), t[1])
    if not targets:
        raise OpenBoundary(f"mask never reaches the {side} border")
    target = min(targets, key=key)
    return list(shortest_path(M, B, node, target, cfg).nodes)


def segment(image, out1, out2, cfg: PipelineConfig = PipelineConfig()) -> SegmentationResult:
    """Reconstruct the pectoral boundary and masks for one image.

    Errors from individual stages propagate with the stage name attached.
    The returned masks and path live in the original image frame; the run
    report records the orientation, threshold, completion activity, and
    path statistics.
    """
    image = np.asarray(image, dtype=np.uint8)
    out1 = np.asarray(out1, dtype=np.float32)
    out2 = np.asarray(out2, dtype=np.float32)
    if not (image.shape == out1.shape == out2.shape):
        raise ShapeError(
            f"raster shapes differ: {image.shape}, {out1.shape}, {out2.shape}"
        )
    h, w = image.shape
    report: dict[str, str] = {}

    with _stage("orient"):
        orientation = detect_orientation(image)
    report["orientation.flip_horizontal"] = _fmt(orientation.flip_horizontal)
    report["orientation.flip_vertical"] = _fmt(orientation.flip_vertical)
    out1_c = apply_orientation(out1, orientation)
    out2_c = apply_orientation(out2, orientation)

    with _stage("threshold"):
        if cfg.threshold_override is not None:
            threshold = cfg.threshold_override
            report["threshold.source"] = "override"
        else:
            threshold = morphology.otsu_threshold(out2_c)
            report["threshold.source"] = "otsu"
    report["threshold.value"] = _fmt(threshold)

    with _stage("binarize"):
        raw_mask = morphology.binarize(out2_c, threshold)
    with _stage("prune"):
        band = morphology.longest_component(raw_mask)
    report["prune.component_pixels"] = str(int(band.sum()))

    completion_report: dict = {}
    with _stage("complete"):
        completed = morphology.complete_mask(band, cfg.completion, completion_report)
    added = completed & ~band
    report["complete.left_short"] = _fmt(completion_report.get("left_short", False))
    report["complete.right_short"] = _fmt(completion_report.get("right_short", False))
    report["complete.applied"] = _fmt(bool(added.any()))
    for side in ("left", "bottom"):
        detail = completion_report.get(side)
        if detail:
            report[f"complete.{side}.stroke_width"] = str(detail["stroke_width"])
            report[f"complete.{side}.direction"] = (
                f"{detail['direction'][0]:.6f},{detail['direction'][1]:.6f}"
            )
            report[f"complete.{side}.short_skeleton"] = _fmt(detail["short_skeleton"])

    with _stage("fuse"):
        fused = fuse(completed, out1_c, out2_c, cfg, added=added)

    with _stage("terminals"):
        start, end = select_terminals(completed)
    report["terminals.start"] = f"{start[0]},{start[1]}"
    report["terminals.end"] = f"{end[0]},{end[1]}"

    with _stage("path"):
        core = shortest_path(fused, completed, start, end, cfg.graph)
        left_leg = _bridge_to_border(fused, completed, start, "left", cfg.graph)
        bottom_leg = _bridge_to_border(fused, completed, end, "bottom", cfg.graph)
        nodes = list(reversed(left_leg))[:-1] + list(core.nodes) + bottom_leg[1:]
        nodes = _erase_loops(nodes)
    report["path.cost"] = _fmt(core.total_cost)
    report["path.nodes"] = str(len(nodes))
    report["path.bridge_left"] = str(len(left_leg) - 1)
    report["path.bridge_bottom"] = str(len(bottom_leg) - 1)

    with _stage("mask"):
        pectoral_c, breast_c = mask_from_boundary(
            PixelPath(nodes=tuple(nodes), total_cost=core.total_cost), w, h
        )

    pectoral = apply_orientation(pectoral_c, orientation)
    breast = apply_orientation(breast_c, orientation)
    boundary_nodes = tuple(
        (
            h - 1 - r if orientation.flip_vertical else r,
            w - 1 - c if orientation.flip_horizontal else c,
        )
        for r, c in nodes
    )
    boundary = PixelPath(nodes=boundary_nodes, total_cost=core.total_cost)
    return SegmentationResult(
        boundary=boundary,
        pectoral_mask=pectoral,
        breast_mask=breast,
        run_report=report,
    )


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)
