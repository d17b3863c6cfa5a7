"""Inference over a directory of images, exported as EPM1 map pairs.

Every image gets ``<stem>.out1.epm`` and ``<stem>.out2.epm`` in the output
directory.  Unreadable images are skipped and reported, not fatal.
"""

from __future__ import annotations

import os
import re

import numpy as np
import torch

from .errors import CnnEdgeError
from .model import EdgeNet
from .rasters import read_pgm, write_epm


def find_images(images_dir: str) -> list[tuple[str, str]]:
    """(stem, path) for every image under the directory.

    Flat layouts use the file name; phantom-corpus layouts
    (``phantom_0000/image.pgm``) flatten the relative path into the stem.
    """
    found = []
    for dirpath, dirnames, filenames in os.walk(images_dir):
        dirnames.sort()
        for name in sorted(filenames):
            if not name.endswith(".pgm") or name.startswith("gt_"):
                continue
            full = os.path.join(dirpath, name)
            rel = os.path.relpath(full, images_dir)
            stem = re.sub(r"[^A-Za-z0-9_-]+", "_", os.path.splitext(rel)[0]).strip("_")
            found.append((stem, full))
    return found


def export_maps(net: EdgeNet, images_dir: str, out_dir: str):
    """Run the network over a directory; returns (written, skipped) where
    skipped is a list of (path, reason)."""
    os.makedirs(out_dir, exist_ok=True)
    net.eval()
    written = []
    skipped = []
    for stem, path in find_images(images_dir):
        try:
            image = read_pgm(path)
        except (CnnEdgeError, OSError) as err:
            skipped.append((path, str(err)))
            continue
        tensor = torch.from_numpy(image.astype(np.float32) / 255.0)
        out1, out2 = net.predict(tensor)
        write_epm(os.path.join(out_dir, f"{stem}.out1.epm"),
                  np.clip(out1.numpy(), 0.0, 1.0))
        write_epm(os.path.join(out_dir, f"{stem}.out2.epm"),
                  np.clip(out2.numpy(), 0.0, 1.0))
        written.append(stem)
    return written, skipped
