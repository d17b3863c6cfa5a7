#!/usr/bin/env python3
"""The path search on a raster small enough to print.

Shows how the edge weights 2 / (M(p) + M(q) + eps) steer the search: the
minimal path hugs high probabilities, refuses pixels outside the mask, and
its cost is exactly the sum of its edge weights.
"""

import numpy as np

from pectseg import GraphConfig, edge_weight, shortest_path

M = np.array(
    [
        [0.9, 0.9, 0.1, 0.1, 0.1],
        [0.1, 0.9, 0.1, 0.1, 0.1],
        [0.1, 0.9, 0.9, 0.2, 0.1],
        [0.1, 0.1, 0.9, 0.9, 0.2],
        [0.1, 0.1, 0.1, 0.9, 0.9],
    ],
    dtype=np.float32,
)
B = np.ones((5, 5), dtype=bool)
B[1, 3] = False  # a hole the path must not enter

print("probability map:")
print(M)

cfg = GraphConfig()
print("\nsome edge weights:")
for p, q in (((0, 0), (0, 1)), ((0, 1), (1, 1)), ((0, 2), (0, 3)), ((0, 3), (1, 3))):
    w = edge_weight(M, B, p, q, cfg)
    print(f"  w({p} -> {q}) = {w:.3f}")

path = shortest_path(M, B, (0, 0), (4, 4), cfg)
print(f"\nminimal path, cost {path.total_cost:.4f}:")
grid = np.full((5, 5), ".", dtype=object)
grid[~B] = "#"
for r, c in path.nodes:
    grid[r, c] = "*"
for row in grid:
    print("  " + " ".join(row))

total = sum(edge_weight(M, B, p, q, cfg) for p, q in zip(path.nodes, path.nodes[1:]))
print(f"\nsum of edge weights along the path: {total:.4f} (equals the reported cost)")

cheap = shortest_path(np.full((5, 5), 0.2, np.float32), B, (0, 0), (4, 4), cfg)
print(f"flat map cost for comparison: {cheap.total_cost:.4f} "
      f"({len(cheap.nodes)} nodes, pure diagonal)")
