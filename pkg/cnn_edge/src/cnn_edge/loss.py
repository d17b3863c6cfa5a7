"""Class-balanced boundary loss over the two side outputs.

Boundary pixels are a sliver of any edge label, so the two classes are
reweighted per image: with ``pos`` on-boundary and ``neg`` off-boundary
pixels out of ``n = pos + neg``,

    alpha = lambda * pos / n      (weight of the y=0 pixels)
    beta  = neg / n               (weight of the y=1 pixels)

and the per-pixel loss is the negated log-likelihood

    l(x) = beta * softplus(-x)   for y = 1
    l(x) = alpha * softplus(x)   for y = 0

(softplus(-x) = -log(sigmoid(x)), so this is the weighted cross entropy
written stably in terms of the pre-sigmoid activation x).  Losses are
summed over pixels and over both stage maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from .errors import DegenerateLabels, ShapeError

__all__ = ["LossConfig", "class_weights", "balanced_loss", "balanced_loss_grad",
           "balanced_loss_torch"]


@dataclass(frozen=True)
class LossConfig:
    balance: float = 1.5  # lambda in the weighting above

    def __post_init__(self):
        if self.balance <= 0:
            raise ValueError("balance must be positive")


def class_weights(labels, balance: float = 1.5) -> tuple[float, float]:
    """(alpha, beta) for one label mask."""
    labels = np.asarray(labels, dtype=bool)
    pos = int(labels.sum())
    neg = labels.size - pos
    if pos == 0 or neg == 0:
        raise DegenerateLabels("label mask needs both classes")
    total = pos + neg
    alpha = balance * pos / total
    beta = neg / total
    return alpha, beta


def _softplus(x):
    # overflow-safe: softplus(x) = max(x, 0) + log1p(exp(-|x|))
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def balanced_loss(x1, x2, labels, cfg: LossConfig = LossConfig()) -> float:
    """Total loss of the two pre-sigmoid maps against one label mask."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    labels = np.asarray(labels, dtype=bool)
    if x1.shape != labels.shape or x2.shape != labels.shape:
        raise ShapeError(
            f"activation/label shapes differ: {x1.shape}, {x2.shape}, {labels.shape}"
        )
    alpha, beta = class_weights(labels, cfg.balance)
    total = 0.0
    for x in (x1, x2):
        pixel = np.where(labels, beta * _softplus(-x), alpha * _softplus(x))
        total += float(pixel.sum())
    return total


def balanced_loss_grad(x1, x2, labels, cfg: LossConfig = LossConfig()):
    """Closed-form gradient of :func:`balanced_loss` in both activations.

    d/dx [beta * softplus(-x)] = -beta * (1 - sigmoid(x))   (y = 1)
    d/dx [alpha * softplus(x)] =  alpha * sigmoid(x)        (y = 0)
    """
    labels = np.asarray(labels, dtype=bool)
    alpha, beta = class_weights(labels, cfg.balance)
    grads = []
    for x in (x1, x2):
        x = np.asarray(x, dtype=np.float64)
        s = _sigmoid(x)
        grads.append(np.where(labels, -beta * (1.0 - s), alpha * s))
    return grads[0], grads[1]


def balanced_loss_torch(logits1: torch.Tensor, logits2: torch.Tensor,
                        labels: torch.Tensor, cfg: LossConfig = LossConfig()) -> torch.Tensor:
    """Batch version used in training: (N, 1, H, W) logits, (N, H, W) bool
    labels, per-image class weights, summed over everything."""
    if labels.dim() != 3:
        raise ShapeError("labels must be (N, H, W)")
    n = labels.shape[1] * labels.shape[2]
    pos = labels.reshape(labels.shape[0], -1).sum(dim=1).double()
    if (pos == 0).any() or (pos == n).any():
        raise DegenerateLabels("a label mask in the batch has a single class")
    alpha = (cfg.balance * pos / n).reshape(-1, 1, 1)
    beta = ((n - pos) / n).reshape(-1, 1, 1)
    y = labels.double()
    total = logits1.new_zeros((), dtype=torch.float64)
    for logits in (logits1, logits2):
        x = logits[:, 0].double()
        pixel = y * beta * F.softplus(-x) + (1.0 - y) * alpha * F.softplus(x)
        total = total + pixel.sum()
    return total
