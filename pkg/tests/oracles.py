"""Hand-rolled reference implementations used as independent test oracles.

Everything here is deliberately written the slow, obvious way (BFS, DFS,
pixel loops, running sums) and shares no code with the library paths it
checks.
"""

from __future__ import annotations

import math

OFFSETS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))
OFFSETS_4 = ((-1, 0), (1, 0), (0, -1), (0, 1))


def flood_components(mask, connectivity=8):
    """All connected components of a bool raster as sets of (r, c)."""
    offsets = OFFSETS_8 if connectivity == 8 else OFFSETS_4
    h, w = mask.shape
    seen = set()
    components = []
    for r in range(h):
        for c in range(w):
            if not mask[r, c] or (r, c) in seen:
                continue
            queue = [(r, c)]
            seen.add((r, c))
            comp = set()
            while queue:
                cur = queue.pop()
                comp.add(cur)
                for dr, dc in offsets:
                    nr, nc = cur[0] + dr, cur[1] + dc
                    if 0 <= nr < h and 0 <= nc < w and mask[nr, nc] and (nr, nc) not in seen:
                        seen.add((nr, nc))
                        queue.append((nr, nc))
            components.append(comp)
    return components


def flood_region(blocked, seed, height, width, connectivity=4):
    """Pixels reachable from `seed` without entering `blocked` pixels."""
    offsets = OFFSETS_4 if connectivity == 4 else OFFSETS_8
    if seed in blocked:
        return set()
    seen = {seed}
    queue = [seed]
    while queue:
        cur = queue.pop()
        for dr, dc in offsets:
            nr, nc = cur[0] + dr, cur[1] + dc
            nxt = (nr, nc)
            if 0 <= nr < height and 0 <= nc < width and nxt not in blocked and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def otsu_exhaustive(values):
    """Threshold by trying every one of the 256 candidate bin boundaries."""
    hist = [0] * 256
    for v in values.ravel().tolist():
        b = int(v * 256)
        hist[min(b, 255)] += 1
    total = sum(hist)
    total_sum = sum(i * hist[i] for i in range(256))
    best_sigma = -1.0
    best_k = 0
    n0 = 0
    s0 = 0
    for k in range(255):
        n0 += hist[k]
        s0 += k * hist[k]
        n1 = total - n0
        if n0 == 0 or n1 == 0:
            continue
        mu0 = s0 / n0
        mu1 = (total_sum - s0) / n1
        sigma = (mu0 - mu1) ** 2 * (n0 * n1)
        if sigma > best_sigma:
            best_sigma = sigma
            best_k = k
    return (best_k + 1) / 256.0


def brute_force_path_cost(M, B, S, E, eps=1e-6):
    """Minimal cost over all simple S->E paths by exhaustive DFS.

    Costs accumulate left to right along each path, matching how any
    relaxation-based search folds them.  Returns None when E is
    unreachable.  Pruning on partial cost is exact because float addition
    of positive weights never decreases the total.
    """
    h, w = B.shape
    if not (B[S] and B[E]):
        return None
    best = [math.inf]

    def dfs(node, cost, visited):
        if cost >= best[0]:
            return
        if node == E:
            best[0] = cost
            return
        for dr, dc in OFFSETS_8:
            q = (node[0] + dr, node[1] + dc)
            if 0 <= q[0] < h and 0 <= q[1] < w and B[q] and q not in visited:
                weight = 2.0 / (float(M[node]) + float(M[q]) + eps)
                visited.add(q)
                dfs(q, cost + weight, visited)
                visited.discard(q)

    dfs(S, 0.0, {S})
    return None if best[0] == math.inf else best[0]


def confusion_loop(estimated, truth):
    """(tp, tn, fp, fn) by a per-pixel Python loop."""
    tp = tn = fp = fn = 0
    h, w = estimated.shape
    for r in range(h):
        for c in range(w):
            e = bool(estimated[r, c])
            g = bool(truth[r, c])
            if e and g:
                tp += 1
            elif e and not g:
                fp += 1
            elif not e and g:
                fn += 1
            else:
                tn += 1
    return tp, tn, fp, fn


def nearest_distance_scan(est_nodes, gt_nodes):
    """(mean, max) nearest-neighbour distance by an all-pairs scan."""
    dists = []
    for er, ec in est_nodes:
        best = math.inf
        for gr, gc in gt_nodes:
            d = math.hypot(er - gr, ec - gc)
            if d < best:
                best = d
        dists.append(best)
    return sum(dists) / len(dists), max(dists)


def mean_std_two_pass(values):
    """(mean, sample stddev) with an explicit two-pass formula."""
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return mean, math.sqrt(var)


def tree_hash(root):
    """Relative path -> SHA-256 of file contents, for whole-tree comparison."""
    import hashlib
    import os

    out = {}
    for dirpath, _, files in os.walk(root):
        for name in files:
            full = os.path.join(dirpath, name)
            rel = os.path.relpath(full, root)
            with open(full, "rb") as fh:
                out[rel] = hashlib.sha256(fh.read()).hexdigest()
    return out
