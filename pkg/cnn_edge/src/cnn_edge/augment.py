"""Ten-fold training-pair augmentation at the network's standard 256x256.

One input pair yields exactly ten: the original, a 0.9-rescale zero-padded
back to size, a 1.1-rescale center-cropped back to size, and the seven
non-identity symmetries generated by vertical, horizontal, and diagonal
(transpose) flipping.  Image and label always transform together; labels
are resampled nearest-neighbour so they stay binary.
"""

from __future__ import annotations

import numpy as np
import torch
import torch.nn.functional as F

from .errors import ShapeError

SIZE = 256


def _rescale(image: np.ndarray, labels: np.ndarray, factor: float):
    target = int(round(SIZE * factor))
    img = torch.from_numpy(image.astype(np.float32)).reshape(1, 1, SIZE, SIZE)
    lab = torch.from_numpy(labels.astype(np.float32)).reshape(1, 1, SIZE, SIZE)
    img = F.interpolate(img, size=(target, target), mode="bilinear", align_corners=False)
    lab = F.interpolate(lab, size=(target, target), mode="nearest")
    img = img[0, 0].numpy()
    lab = lab[0, 0].numpy() >= 0.5
    if target <= SIZE:
        pad0 = (SIZE - target) // 2
        pad1 = SIZE - target - pad0
        img = np.pad(img, ((pad0, pad1), (pad0, pad1)))
        lab = np.pad(lab, ((pad0, pad1), (pad0, pad1)))
    else:
        cut0 = (target - SIZE) // 2
        img = img[cut0 : cut0 + SIZE, cut0 : cut0 + SIZE]
        lab = lab[cut0 : cut0 + SIZE, cut0 : cut0 + SIZE]
    return np.clip(np.rint(img), 0, 255).astype(np.uint8), lab


_SYMMETRIES = (
    lambda a: a[::-1, :],              # vertical flip
    lambda a: a[:, ::-1],              # horizontal flip
    lambda a: a[::-1, ::-1],           # both (180 degrees)
    lambda a: a.T,                     # diagonal flip (transpose)
    lambda a: a[::-1, ::-1].T,         # anti-diagonal flip
    lambda a: np.rot90(a, 1),
    lambda a: np.rot90(a, 3),
)


def augment(image: np.ndarray, labels: np.ndarray):
    """All ten training pairs for one (image, label) pair."""
    image = np.asarray(image, dtype=np.uint8)
    labels = np.asarray(labels, dtype=bool)
    if image.shape != (SIZE, SIZE) or labels.shape != (SIZE, SIZE):
        raise ShapeError(f"augmentation expects {SIZE}x{SIZE} pairs")
    pairs = [(image.copy(), labels.copy())]
    pairs.append(_rescale(image, labels, 0.9))
    pairs.append(_rescale(image, labels, 1.1))
    for op in _SYMMETRIES:
        pairs.append((np.ascontiguousarray(op(image)), np.ascontiguousarray(op(labels))))
    return pairs
