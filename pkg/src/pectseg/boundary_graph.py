"""Weighted pixel graph over the edge mask and its minimal boundary path.

Every pixel is a node; two pixels are connected when they are 8-neighbours
and both lie inside the working mask B, with weight

    w(p, q) = 2 / (M(p) + M(q) + epsilon)

so steps through high edge probability are cheap and steps outside B are
impossible.  The pectoral boundary is recovered as the minimal-cost path
between the two skeleton endpoints of B.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousSkeleton, NoPath
from .morphology import skeletonize

__all__ = [
    "GraphConfig",
    "PixelPath",
    "NEIGHBOR_OFFSETS",
    "edge_weight",
    "select_terminals",
    "shortest_path",
]

NEIGHBOR_OFFSETS = (
    (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 1),
    (1, -1), (1, 0), (1, 1),
)


@dataclass(frozen=True)
class GraphConfig:
    """Graph construction knobs.

    ``epsilon`` keeps weights finite where both probabilities are zero,
    which happens on extrapolated corridor pixels; the neighbourhood is
    always 8-connected.
    """

    epsilon: float = 1e-6

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class PixelPath:
    """Ordered 8-connected pixel coordinates from start to end."""

    nodes: tuple[tuple[int, int], ...]
    total_cost: float

    def __len__(self) -> int:
        return len(self.nodes)


def edge_weight(M, B, p, q, cfg: GraphConfig = GraphConfig()) -> float:
    """Weight of the edge p -> q, infinite when the nodes are not linked.

    Finite iff q is an 8-neighbour of p and both pixels lie in B.
    """
    M = np.asarray(M)
    B = np.asarray(B, dtype=bool)
    h, w = B.shape
    pr, pc = p
    qr, qc = q
    if not (0 <= pr < h and 0 <= pc < w):
        raise ValueError(f"pixel {p} outside the raster")
    if not (0 <= qr < h and 0 <= qc < w):
        return math.inf
    if (qr - pr, qc - pc) not in NEIGHBOR_OFFSETS:
        return math.inf
    if not (B[pr, pc] and B[qr, qc]):
        return math.inf
    return 2.0 / (float(M[pr, pc]) + float(M[qr, qc]) + cfg.epsilon)


def select_terminals(B) -> tuple[tuple[int, int], tuple[int, int]]:
    """Start and end pixels for the path search: the skeleton endpoints.

    S is the endpoint with the smaller column index (first-column side),
    E the other; equal columns resolve by the smaller row.
    """
    info = skeletonize(B)
    if len(info.endpoints) != 2:
        raise AmbiguousSkeleton(
            f"skeleton has {len(info.endpoints)} endpoints, expected 2"
        )
    s, e = sorted(info.endpoints, key=lambda p: (p[1], p[0]))
    return s, e


def shortest_path(M, B, S, E, cfg: GraphConfig = GraphConfig()) -> PixelPath:
    """Globally minimal-cost path from S to E restricted to B.

    Dijkstra with a binary heap over (distance, row, col), so equal
    distances expand the lexicographically smallest pixel first; on an
    equal-distance relaxation the lexicographically smaller predecessor is
    kept.  Parents are recorded at every successful relaxation and the
    node sequence is recovered by backtracking from E.
    """
    M = np.asarray(M)
    B = np.asarray(B, dtype=bool)
    h, w = B.shape
    S = (int(S[0]), int(S[1]))
    E = (int(E[0]), int(E[1]))
    for name, (r, c) in (("start", S), ("end", E)):
        if not (0 <= r < h and 0 <= c < w) or not B[r, c]:
            raise NoPath(f"{name} pixel {(r, c)} is not inside the mask")
    if S == E:
        return PixelPath(nodes=(S,), total_cost=0.0)

    eps = cfg.epsilon
    dist = np.full((h, w), math.inf)
    dist[S] = 0.0
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    settled = np.zeros((h, w), dtype=bool)
    heap: list[tuple[float, int, int]] = [(0.0, S[0], S[1])]

    while heap:
        d, ur, uc = heapq.heappop(heap)
        if settled[ur, uc] or d > dist[ur, uc]:
            continue
        settled[ur, uc] = True
        if (ur, uc) == E:
            break
        mu = float(M[ur, uc])
        for dr, dc in NEIGHBOR_OFFSETS:
            qr, qc = ur + dr, uc + dc
            if not (0 <= qr < h and 0 <= qc < w) or not B[qr, qc] or settled[qr, qc]:
                continue
            nd = d + 2.0 / (mu + float(M[qr, qc]) + eps)
            if nd < dist[qr, qc]:
                dist[qr, qc] = nd
                parent[(qr, qc)] = (ur, uc)
                heapq.heappush(heap, (nd, qr, qc))
            elif nd == dist[qr, qc] and (ur, uc) < parent.get((qr, qc), (h, w)):
                parent[(qr, qc)] = (ur, uc)

    if not settled[E]:
        raise NoPath(f"end pixel {E} unreachable from {S} inside the mask")

    nodes = [E]
    while nodes[-1] != S:
        nodes.append(parent[nodes[-1]])
    nodes.reverse()
    return PixelPath(nodes=tuple(nodes), total_cost=float(dist[E]))
