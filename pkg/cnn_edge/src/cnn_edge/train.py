"""Desk-scale training loop: stochastic gradient descent over a phantom
corpus with the class-balanced boundary loss on both side outputs.

A corpus is a directory of phantom folders, each holding ``image.pgm``
and its boundary label ``gt_boundary.pgm`` (a 0/255 mask).  Shuffling is
seeded, so a run is reproducible end to end.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np
import torch

from .augment import augment
from .errors import InsufficientData
from .loss import LossConfig, balanced_loss_torch
from .model import EdgeNet
from .rasters import read_label_mask, read_pgm

MIN_CORPUS = 20


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    batch_size: int = 2
    epochs: int = 30
    momentum: float = 0.9
    seed: int = 0
    use_augmentation: bool = False  # ten-fold scheme; 256x256 corpora only
    # normalized-gradient ceiling: the stabilizer standing in for pretrained
    # initialization; an unnormalized VGG under momentum oscillates violently
    # without it at desk scale
    grad_clip: float = 200.0

    def __post_init__(self):
        if self.learning_rate <= 0 or self.batch_size < 1 or self.epochs < 0:
            raise ValueError("learning rate and batch size must be positive, epochs >= 0")


def load_corpus(corpus_dir: str):
    """All (image, label) pairs under a corpus directory, sorted by path."""
    pairs = []
    for dirpath, dirnames, filenames in os.walk(corpus_dir):
        dirnames.sort()
        if "image.pgm" in filenames and "gt_boundary.pgm" in filenames:
            pairs.append(
                (
                    read_pgm(os.path.join(dirpath, "image.pgm")),
                    read_label_mask(os.path.join(dirpath, "gt_boundary.pgm")),
                )
            )
    return pairs


def train(corpus_dir: str, net: EdgeNet, tc: TrainConfig = TrainConfig(),
          lc: LossConfig = LossConfig()):
    """Train in place; returns the per-epoch mean-loss history."""
    pairs = load_corpus(corpus_dir)
    if len(pairs) < MIN_CORPUS:
        raise InsufficientData(
            f"corpus holds {len(pairs)} labelled images, need >= {MIN_CORPUS}"
        )
    if tc.epochs == 0:
        return []
    if tc.use_augmentation:
        pairs = [aug for image, labels in pairs for aug in augment(image, labels)]

    images = torch.stack(
        [torch.from_numpy(img.astype(np.float32) / 255.0) for img, _ in pairs]
    )
    labels = torch.stack([torch.from_numpy(lab.copy()) for _, lab in pairs])

    rng = np.random.default_rng(tc.seed)
    optimizer = torch.optim.SGD(
        net.parameters(), lr=tc.learning_rate, momentum=tc.momentum
    )
    net.train()
    history = []
    for _ in range(tc.epochs):
        order = rng.permutation(len(pairs))
        epoch_loss = 0.0
        for at in range(0, len(order), tc.batch_size):
            batch = order[at : at + tc.batch_size]
            x = images[batch].unsqueeze(1).repeat(1, 3, 1, 1)
            y = labels[batch]
            optimizer.zero_grad()
            logits1, logits2 = net(x)
            loss = balanced_loss_torch(logits1, logits2, y, lc)
            loss.backward()
            torch.nn.utils.clip_grad_norm_(net.parameters(), tc.grad_clip)
            optimizer.step()
            epoch_loss += float(loss.detach())
        history.append(epoch_loss / len(pairs))
    net.eval()
    return history
