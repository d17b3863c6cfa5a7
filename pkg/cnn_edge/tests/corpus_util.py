"""Tiny hand-built corpora for training/export unit tests (no dependency
on the segmentation engine)."""

import os

import numpy as np

from cnn_edge.rasters import write_pgm


def make_phantom(seed, size=64):
    """Wedge image + boundary label, drawn directly."""
    rng = np.random.default_rng(seed)
    r0 = int(rng.integers(size // 8, size // 3))
    c1 = int(rng.integers(size // 3, int(size * 0.7)))
    rows = np.arange(r0, size)
    frac = (rows - r0) / (size - 1 - r0)
    cols = np.rint(np.clip(frac * c1, 0, size - 1)).astype(int)
    label = np.zeros((size, size), dtype=bool)
    label[rows, cols] = True
    image = np.full((size, size), 90, dtype=np.uint8)
    for r, c in zip(rows, cols):
        image[r, : c + 1] = 180
    image += rng.integers(0, 6, size=(size, size), dtype=np.uint8)
    return image, label


def make_corpus(root, count, size=64, seed=0):
    os.makedirs(root, exist_ok=True)
    for i in range(count):
        sub = os.path.join(root, f"phantom_{i:04d}")
        os.makedirs(sub, exist_ok=True)
        image, label = make_phantom(seed * 1000 + i, size)
        write_pgm(os.path.join(sub, "image.pgm"), image)
        write_pgm(os.path.join(sub, "gt_boundary.pgm"),
                  np.where(label, 255, 0).astype(np.uint8))
    return root
