"""Binarization, pruning, skeletonization, and edge-mask completion.

The coarse edge map is turned into a working mask in four moves: Otsu
thresholding, retention of the largest 8-connected component, thinning to a
one-pixel skeleton whose endpoints anchor everything downstream, and --
when the mask stops short of the first column or the last row -- a straight
extrapolation of the skeleton tail drawn with a brush as thick as the band
it continues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import (
    AmbiguousSkeleton,
    DegenerateHistogram,
    EmptyMask,
    ExtrapolationDiverged,
)

__all__ = [
    "ComponentLabeling",
    "SkeletonInfo",
    "CompletionParams",
    "otsu_threshold",
    "binarize",
    "label_components",
    "longest_component",
    "skeletonize",
    "is_disconnected",
    "complete_mask",
]

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class ComponentLabeling:
    """8-connected component labels (0 = background) and per-id pixel counts."""

    labels: np.ndarray
    component_sizes: np.ndarray


@dataclass(frozen=True)
class SkeletonInfo:
    """One-pixel-wide skeleton plus its endpoints in row-major order."""

    skeleton: np.ndarray
    endpoints: list[tuple[int, int]]


@dataclass(frozen=True)
class CompletionParams:
    """Tuning knobs for edge completion.

    ``arc_distance`` is the skeleton arc length (axial step 1, diagonal
    step sqrt(2)) walked inward from the short endpoint before fitting the
    least-squares line; 25 gives stable extrapolations.  The stroke width
    is not a knob: it is the average thickness of the existing band,
    component area divided by skeleton length.
    """

    arc_distance: int = 25

    def __post_init__(self):
        if self.arc_distance < 2:
            raise ValueError("arc_distance must be >= 2")


# ---------------------------------------------------------------------------
# Thresholding
# ---------------------------------------------------------------------------

def _otsu_split(hist: np.ndarray) -> int:
    """Index k of the split (class 0 = bins 0..k) with maximal between-class
    variance; ties resolve to the smallest k.

    Works from exact integer counts so the scores are bit-reproducible:
    sigma(k) = (mu0 - mu1)^2 * (n0 * n1), a positive rescaling of the
    classic criterion.
    """
    counts = hist.astype(np.int64)
    n0 = np.cumsum(counts)[:-1]
    s0 = np.cumsum(counts * np.arange(len(counts), dtype=np.int64))[:-1]
    n1 = int(counts.sum()) - n0
    s1 = int((counts * np.arange(len(counts))).sum()) - s0
    valid = (n0 > 0) & (n1 > 0)
    sigma = np.zeros(len(counts) - 1, dtype=np.float64)
    mu0 = np.divide(s0, n0, out=np.zeros_like(sigma), where=valid)
    mu1 = np.divide(s1, n1, out=np.zeros_like(sigma), where=valid)
    sigma[valid] = ((mu0 - mu1) ** 2 * (n0 * n1))[valid]
    return int(np.argmax(sigma))


def otsu_threshold(prob_map: np.ndarray) -> float:
    """Otsu threshold over a 256-bin histogram of a [0, 1] map.

    Returns the bin boundary (k + 1) / 256 maximizing the between-class
    variance; ties break toward the lower threshold.  A map that collapses
    into a single bin has no threshold and raises DegenerateHistogram.
    """
    values = np.asarray(prob_map, dtype=np.float64)
    bins = np.minimum((values * 256.0).astype(np.int64), 255)
    hist = np.bincount(bins.ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        raise DegenerateHistogram("probability map quantizes to a single bin")
    return (_otsu_split(hist) + 1) / 256.0


def otsu_threshold_u8(image: np.ndarray) -> int:
    """Otsu split level for a uint8 image: foreground is ``image > level``."""
    image = np.asarray(image, dtype=np.uint8)
    hist = np.bincount(image.ravel(), minlength=256)
    if np.count_nonzero(hist) < 2:
        raise DegenerateHistogram("image histogram has a single occupied level")
    return _otsu_split(hist)


def binarize(prob_map: np.ndarray, threshold: float) -> np.ndarray:
    """Hard threshold: pixel true iff its value exceeds the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold {threshold} outside [0, 1]")
    return np.asarray(prob_map) > threshold


# ---------------------------------------------------------------------------
# Connected components
# ---------------------------------------------------------------------------

def label_components(mask: np.ndarray) -> ComponentLabeling:
    """Label 8-connected components; sizes are indexed by label id - 1."""
    mask = np.asarray(mask, dtype=bool)
    labels, count = ndimage.label(mask, structure=_EIGHT)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)[1:]
    return ComponentLabeling(labels=labels, component_sizes=sizes)


def longest_component(mask: np.ndarray) -> np.ndarray:
    """Keep only the largest 8-connected component.

    Ties break toward the component whose first pixel comes earliest in
    row-major order, so the result is deterministic.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("mask has no true pixels")
    labeling = label_components(mask)
    sizes = labeling.component_sizes
    best_size = sizes.max()
    candidates = np.flatnonzero(sizes == best_size) + 1
    if len(candidates) == 1:
        best = candidates[0]
    else:
        flat = labeling.labels.ravel()
        best = min(candidates, key=lambda lbl: int(np.argmax(flat == lbl)))
    return labeling.labels == best


# ---------------------------------------------------------------------------
# Thinning
# ---------------------------------------------------------------------------

def _ring(img: np.ndarray):
    """The eight neighbours of every pixel as uint8 planes, clockwise from
    north (P2..P9 in the thinning literature), zero outside the raster."""
    p = np.pad(img.astype(np.uint8), 1)
    return (
        p[:-2, 1:-1],  # N
        p[:-2, 2:],    # NE
        p[1:-1, 2:],   # E
        p[2:, 2:],     # SE
        p[2:, 1:-1],   # S
        p[2:, :-2],    # SW
        p[1:-1, :-2],  # W
        p[:-2, :-2],   # NW
    )


def _zs_candidates(img: np.ndarray, first_pass: bool) -> np.ndarray:
    ring = _ring(img)
    n, ne, e, se, s, sw, w, nw = ring
    b = sum(plane.astype(np.int8) for plane in ring)
    a = np.zeros(img.shape, dtype=np.int8)
    cyc = ring + (ring[0],)
    for i in range(8):
        a += ((cyc[i] == 0) & (cyc[i + 1] == 1)).astype(np.int8)
    if first_pass:
        corner = ((n * e * s) == 0) & ((e * s * w) == 0)
    else:
        corner = ((n * e * w) == 0) & ((n * s * w) == 0)
    return img & (b >= 2) & (b <= 6) & (a == 1) & corner


def _transition_count(img: np.ndarray, r: int, c: int) -> tuple[int, int]:
    """(number of 0->1 transitions around (r, c), number of true neighbours)."""
    h, w = img.shape
    seq = []
    for dr, dc in ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)):
        rr, cc = r + dr, c + dc
        seq.append(1 if 0 <= rr < h and 0 <= cc < w and img[rr, cc] else 0)
    a = sum(1 for i in range(8) if seq[i] == 0 and seq[(i + 1) % 8] == 1)
    return a, sum(seq)


def _thin(mask: np.ndarray) -> np.ndarray:
    """Two-subiteration raster thinning plus a sequential clean-up pass.

    The parallel passes are the classic north/west then south/east
    deletions; the clean-up removes, one pixel at a time in row-major
    order, any non-endpoint simple pixel still sitting in a full 2x2
    block, which parallel thinning can leave behind on staircases.
    """
    img = np.asarray(mask, dtype=bool).copy()
    while True:
        changed = False
        for first_pass in (True, False):
            cand = _zs_candidates(img, first_pass)
            if cand.any():
                # never erase the mask entirely (isolated small blobs):
                # retain the earliest pixel in row-major order
                if cand.sum() == img.sum():
                    keep = np.unravel_index(int(np.argmax(img)), img.shape)
                    cand[keep] = False
                if cand.any():
                    img[cand] = False
                    changed = True
        if not changed:
            break

    while True:
        blocks = img[:-1, :-1] & img[:-1, 1:] & img[1:, :-1] & img[1:, 1:]
        if not blocks.any():
            break
        in_block = np.zeros_like(img)
        in_block[:-1, :-1] |= blocks
        in_block[:-1, 1:] |= blocks
        in_block[1:, :-1] |= blocks
        in_block[1:, 1:] |= blocks
        removed = False
        for r, c in np.argwhere(in_block):
            if not img[r, c] or not _in_block(img, r, c):
                continue
            a, b = _transition_count(img, r, c)
            if a == 1 and b >= 2:
                img[r, c] = False
                removed = True
        if not removed:
            break
    return img


def _in_block(img: np.ndarray, r: int, c: int) -> bool:
    """True when (r, c) is still part of some all-true 2x2 block."""
    h, w = img.shape
    for r0 in (r - 1, r):
        for c0 in (c - 1, c):
            if 0 <= r0 and r0 + 1 < h and 0 <= c0 and c0 + 1 < w:
                if img[r0, c0] and img[r0, c0 + 1] and img[r0 + 1, c0] and img[r0 + 1, c0 + 1]:
                    return True
    return False


def _neighbor_counts(mask: np.ndarray) -> np.ndarray:
    return sum(plane.astype(np.int8) for plane in _ring(mask.astype(bool)))


def skeletonize(mask: np.ndarray) -> SkeletonInfo:
    """Thin a mask to a one-pixel skeleton and list its endpoints.

    The skeleton is a subset of the mask, contains no full 2x2 block, and
    stays connected when the input is connected.  Endpoints are skeleton
    pixels with exactly one 8-connected skeleton neighbour, in row-major
    order.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("cannot skeletonize an empty mask")
    skeleton = _thin(mask)
    counts = _neighbor_counts(skeleton)
    endpoints = [tuple(int(v) for v in rc) for rc in np.argwhere(skeleton & (counts == 1))]
    return SkeletonInfo(skeleton=skeleton, endpoints=endpoints)


# ---------------------------------------------------------------------------
# Completion
# ---------------------------------------------------------------------------

def is_disconnected(mask: np.ndarray) -> tuple[bool, bool]:
    """(left_short, right_short) for a canonically oriented mask.

    left_short: no true pixel in column 0; right_short: none in the last
    row.  A complete pectoral edge touches both.
    """
    mask = np.asarray(mask, dtype=bool)
    return (not mask[:, 0].any(), not mask[-1, :].any())


def _walk(skeleton: np.ndarray, start: tuple[int, int], max_arc: float):
    """Follow the skeleton from an endpoint, returning the visited pixels
    and their cumulative arc length (1 per axial step, sqrt(2) diagonal).

    Stops at max_arc or when no unvisited neighbour remains.  When a
    staircase corner offers two unvisited neighbours the first in
    row-major offset order is taken; skipped chord pixels do not affect
    the fit materially.
    """
    h, w = skeleton.shape
    visited = {start}
    points = [start]
    arcs = [0.0]
    cur = start
    while arcs[-1] < max_arc:
        nxt = None
        step = 0.0
        for dr, dc in ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)):
            rr, cc = cur[0] + dr, cur[1] + dc
            if 0 <= rr < h and 0 <= cc < w and skeleton[rr, cc] and (rr, cc) not in visited:
                nxt = (rr, cc)
                step = math.sqrt(2.0) if dr and dc else 1.0
                break
        if nxt is None:
            break
        visited.add(nxt)
        points.append(nxt)
        arcs.append(arcs[-1] + step)
        cur = nxt
    return points, arcs


def _fit_direction(points: list[tuple[int, int]]) -> tuple[float, float]:
    """Unit direction (dr, dc) of the least-squares line through the points.

    The dependent axis is the one with the smaller spread, so near-vertical
    runs are fitted as col(row) and never degenerate.
    """
    rows = np.array([p[0] for p in points], dtype=np.float64)
    cols = np.array([p[1] for p in points], dtype=np.float64)
    r0, c0 = rows.mean(), cols.mean()
    if np.ptp(cols) >= np.ptp(rows):
        denom = ((cols - c0) ** 2).sum()
        slope = ((cols - c0) * (rows - r0)).sum() / denom if denom else 0.0
        d = (slope, 1.0)
    else:
        denom = ((rows - r0) ** 2).sum()
        slope = ((rows - r0) * (cols - c0)).sum() / denom if denom else 0.0
        d = (1.0, slope)
    norm = math.hypot(*d)
    return (d[0] / norm, d[1] / norm)


def _brush_offsets(width: int) -> list[tuple[int, int]]:
    radius = width / 2.0
    reach = int(math.ceil(radius))
    return [
        (dr, dc)
        for dr in range(-reach, reach + 1)
        for dc in range(-reach, reach + 1)
        if dr * dr + dc * dc <= radius * radius
    ]


def _extend(mask, endpoint, direction, width, side) -> dict:
    """Stamp a disc-brush stroke from `endpoint` along `direction` until it
    exits through the border required by `side` ('left' -> column 0,
    'bottom' -> last row).  Exiting anywhere else diverges."""
    h, w = mask.shape
    offsets = _brush_offsets(width)

    def stamp(r, c):
        for dr, dc in offsets:
            rr, cc = r + dr, c + dc
            if 0 <= rr < h and 0 <= cc < w:
                mask[rr, cc] = True

    pos_r, pos_c = float(endpoint[0]), float(endpoint[1])
    max_steps = 4 * (h + w)
    for _ in range(2 * max_steps):
        r = int(round(pos_r))
        c = int(round(pos_c))
        if side == "left" and c <= 0:
            stamp(min(max(r, 0), h - 1), 0)
            return {"direction": direction, "stroke_width": width}
        if side == "bottom" and r >= h - 1:
            stamp(h - 1, min(max(c, 0), w - 1))
            return {"direction": direction, "stroke_width": width}
        if r < 0 or r > h - 1 or c < 0 or c > w - 1:
            break
        stamp(r, c)
        pos_r += direction[0] * 0.5
        pos_c += direction[1] * 0.5
    raise ExtrapolationDiverged(
        f"{side} extension never reached its required border"
    )


def complete_mask(
    mask: np.ndarray,
    params: CompletionParams = CompletionParams(),
    report: dict | None = None,
) -> np.ndarray:
    """Extend a partial edge mask until it touches column 0 and the last row.

    For each short side, the skeleton is walked from its endpoint over an
    arc of ``params.arc_distance`` pixels (or the whole skeleton when it is
    shorter), a least-squares line is fitted to the walked pixels, and the
    line is rasterized outward as a disc-brush stroke of width equal to the
    band's average thickness (component area / skeleton length, minimum 1).
    A mask that already touches both borders is returned unchanged.

    `report`, when given, receives per-side fit details for run reports.
    """
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise EmptyMask("cannot complete an empty mask")
    left_short, right_short = is_disconnected(mask)
    if report is not None:
        report["left_short"] = left_short
        report["right_short"] = right_short
    if not left_short and not right_short:
        return mask.copy()

    info = skeletonize(mask)
    if len(info.endpoints) != 2:
        raise AmbiguousSkeleton(
            f"skeleton has {len(info.endpoints)} endpoints, expected 2"
        )
    left_ep, bottom_ep = sorted(info.endpoints, key=lambda p: (p[1], p[0]))

    _, full_arcs = _walk(info.skeleton, left_ep, math.inf)
    skeleton_length = max(full_arcs[-1], 1.0)
    width = max(1, round(int(mask.sum()) / skeleton_length))

    out = mask.copy()
    sides = []
    if left_short:
        sides.append(("left", left_ep))
    if right_short:
        sides.append(("bottom", bottom_ep))
    for side, endpoint in sides:
        pts, arcs = _walk(info.skeleton, endpoint, float(params.arc_distance))
        short_skeleton = arcs[-1] < params.arc_distance
        if len(pts) < 2:
            raise ExtrapolationDiverged(f"skeleton too short to fit a {side} extension")
        direction = _fit_direction(pts)
        # orient the line outward: away from the walked-in reference point
        ref = pts[-1]
        dot = direction[0] * (endpoint[0] - ref[0]) + direction[1] * (endpoint[1] - ref[1])
        if dot < 0:
            direction = (-direction[0], -direction[1])
        detail = _extend(out, endpoint, direction, width, side)
        detail["short_skeleton"] = short_skeleton
        detail["fit_pixels"] = len(pts)
        if report is not None:
            report[side] = detail

    if is_disconnected(out) != (False, False):
        raise ExtrapolationDiverged("completed mask still misses a border")
    return out
