"""Synthetic MLO-like phantoms with exact ground truth.

Each phantom is generated from a small spec: a monotone quadratic
boundary curve running from column 0 down to the last row, a lower-left
pectoral wedge brighter than the surrounding tissue, a quarter-disc
breast foreground, and simulated network outputs -- a coarse band map
built from the (possibly truncated) boundary and a fine map with optional
clutter blobs.  Generation is a pure function of the spec: the PCG64
generator seeded with ``spec.seed`` makes corpora identical across
platforms and runs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .boundary_graph import PixelPath
from .errors import BadSpec
from .pipeline import mask_from_boundary

__all__ = [
    "PhantomSpec",
    "SCENARIOS",
    "generate",
    "boundary_distance",
    "scenario_spec",
]

SCENARIOS = ("clean", "truncated", "low-contrast", "cluttered")


@dataclass(frozen=True)
class PhantomSpec:
    """Everything needed to rebuild one phantom bit for bit.

    The boundary curve is col(u) = end_col * ((1 - bend) * u + bend * u^2)
    with u running from the start row down to the last row; |bend| <= 1
    keeps it monotone.  ``out2_truncation`` removes that fraction of the
    boundary from each end before the coarse band is drawn.
    """

    seed: int
    size: int = 256
    boundary_start_row: float = 0.08
    boundary_end_col: float = 0.55
    boundary_bend: float = 0.15
    contrast: tuple[int, int, int] = (6, 110, 185)
    clutter_density: float = 0.0
    out2_truncation: float = 0.0
    out2_blur_radius: float = 1.5
    out1_noise_level: float = 0.0


def _validate(spec: PhantomSpec) -> None:
    if spec.size < 32:
        raise BadSpec(f"size {spec.size} too small for a phantom")
    if not -1.0 <= spec.boundary_bend <= 1.0:
        raise BadSpec(f"bend {spec.boundary_bend} makes the curve non-monotone")
    if not 0.0 <= spec.boundary_start_row <= 0.5:
        raise BadSpec(f"start row fraction {spec.boundary_start_row} out of range")
    if not 0.05 <= spec.boundary_end_col <= 1.0:
        raise BadSpec(f"end column fraction {spec.boundary_end_col} out of range")
    if not 0.0 <= spec.out2_truncation <= 0.4:
        raise BadSpec(f"truncation {spec.out2_truncation} outside [0, 0.4]")
    if not 0.0 <= spec.clutter_density <= 1.0:
        raise BadSpec("clutter_density outside [0, 1]")
    if not 0.0 <= spec.out1_noise_level <= 1.0:
        raise BadSpec("out1_noise_level outside [0, 1]")
    if spec.out2_blur_radius <= 0:
        raise BadSpec("out2_blur_radius must be positive")
    bg, tissue, pect = spec.contrast
    if not (0 <= bg < tissue <= pect <= 255):
        raise BadSpec(f"contrast triple {spec.contrast} not ordered")


def _rasterize_curve(r0: int, c1: int, bend: float, height: int) -> list[tuple[int, int]]:
    """8-connected pixel chain of the quadratic from (r0, 0) to (h-1, c1)."""
    span = height - 1 - r0
    nodes = [(r0, 0)]
    for r in range(r0 + 1, height):
        u = (r - r0) / span
        c = int(round(c1 * ((1.0 - bend) * u + bend * u * u)))
        prev = nodes[-1][1]
        if c == prev:
            nodes.append((r, prev))
        else:
            for cc in range(prev + 1, c + 1):
                nodes.append((r, cc))
    return nodes


def _distance_to(nodes, height: int, width: int) -> np.ndarray:
    on = np.ones((height, width), dtype=bool)
    rows = [p[0] for p in nodes]
    cols = [p[1] for p in nodes]
    on[rows, cols] = False
    return ndimage.distance_transform_edt(on)


def generate(spec: PhantomSpec):
    """Build (image, gt_boundary, gt_breast, out1, out2) for a spec."""
    _validate(spec)
    rng = np.random.default_rng(spec.seed)
    h = w = spec.size
    r0 = round(spec.boundary_start_row * (h - 1))
    c1 = round(spec.boundary_end_col * (w - 1))
    if c1 < 1 or r0 > h - 2:
        raise BadSpec("degenerate boundary geometry")
    nodes = _rasterize_curve(r0, c1, spec.boundary_bend, h)
    gt_boundary = PixelPath(nodes=tuple(nodes), total_cost=0.0)
    pectoral, _ = mask_from_boundary(gt_boundary, w, h)

    rr, cc = np.mgrid[0:h, 0:w]
    corner_dist = np.sqrt((h - 1 - rr) ** 2 + cc**2)
    foreground = (corner_dist <= 0.98 * (h - 1)) | pectoral
    gt_breast = foreground & ~pectoral

    bg_i, tissue_i, pect_i = spec.contrast
    image = np.full((h, w), bg_i, dtype=np.int16)
    image[foreground] = tissue_i
    image[pectoral] = pect_i
    texture = rng.integers(-5, 6, size=(h, w), dtype=np.int16)
    # texture stays small so the background/tissue intensity gap survives
    image = image + np.where(foreground, texture, np.abs(texture) // 2)
    image = np.clip(image, 0, 255).astype(np.uint8)

    keep = int(len(nodes) * spec.out2_truncation)
    kept = nodes[keep : len(nodes) - keep] if keep else nodes
    if not kept:
        raise BadSpec("truncation removed the whole boundary")
    d_kept = _distance_to(kept, h, w)
    out2 = np.exp(-0.5 * (d_kept / spec.out2_blur_radius) ** 2).astype(np.float32)

    d_full = _distance_to(nodes, h, w)
    out1 = np.exp(-0.5 * (d_full / 0.7) ** 2)
    out1[d_full > 2.0] = 0.0

    n_blobs = int(round(spec.clutter_density * (spec.size / 16.0) ** 2))
    if n_blobs:
        tissue_flat = np.flatnonzero(gt_breast)
        for _ in range(n_blobs):
            at = int(tissue_flat[rng.integers(0, len(tissue_flat))])
            by, bx = divmod(at, w)
            radius = float(rng.uniform(1.0, 3.0))
            amp = spec.out1_noise_level * float(rng.uniform(0.3, 1.0))
            reach = int(3 * radius) + 1
            ys = slice(max(0, by - reach), min(h, by + reach + 1))
            xs = slice(max(0, bx - reach), min(w, bx + reach + 1))
            lyy, lxx = np.mgrid[ys, xs]
            bump = amp * np.exp(-0.5 * ((lyy - by) ** 2 + (lxx - bx) ** 2) / radius**2)
            out1[ys, xs] += bump
    out1 = np.clip(out1, 0.0, 1.0).astype(np.float32)

    return image, gt_boundary, gt_breast, out1, out2


def boundary_distance(est: PixelPath, gt: PixelPath) -> tuple[float, float]:
    """Mean and max distance from estimated path nodes to the nearest
    ground-truth node."""
    if not est.nodes or not gt.nodes:
        raise ValueError("boundary_distance needs two non-empty paths")
    tree = cKDTree(np.asarray(gt.nodes, dtype=np.float64))
    dists, _ = tree.query(np.asarray(est.nodes, dtype=np.float64))
    return float(dists.mean()), float(dists.max())


def scenario_spec(scenario: str, seed: int, index: int, size: int = 256) -> PhantomSpec:
    """Deterministically draw the spec for corpus entry `index`.

    Each entry gets an independent PCG64 stream keyed by (seed, index), so
    corpora are reproducible and insensitive to generation order.
    """
    if scenario not in SCENARIOS:
        raise BadSpec(f"unknown scenario {scenario!r}, expected one of {SCENARIOS}")
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    start = float(rng.uniform(0.04, 0.16))
    end = float(rng.uniform(0.40, 0.72))
    bend = float(rng.uniform(-0.20, 0.50))
    blur = float(rng.uniform(1.2, 1.8))
    bg = int(rng.integers(2, 13))
    tissue = int(rng.integers(95, 131))
    pect = tissue + int(rng.integers(55, 86))
    truncation = 0.0
    clutter = 0.0
    noise = 0.0
    if scenario == "truncated":
        truncation = float(rng.uniform(0.15, 0.35))
        bend = float(rng.uniform(-0.10, 0.35))
    elif scenario == "low-contrast":
        pect = tissue + int(rng.integers(8, 19))
    elif scenario == "cluttered":
        clutter = float(rng.uniform(0.3, 0.8))
        noise = float(rng.uniform(0.4, 0.9))
    return PhantomSpec(
        seed=int(rng.integers(0, 2**62)),
        size=size,
        boundary_start_row=start,
        boundary_end_col=end,
        boundary_bend=bend,
        contrast=(bg, tissue, pect),
        clutter_density=clutter,
        out2_truncation=truncation,
        out2_blur_radius=blur,
        out1_noise_level=noise,
    )
