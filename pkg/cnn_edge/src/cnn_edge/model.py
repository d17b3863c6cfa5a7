"""Simplified VGG16 edge network with two side outputs.

The backbone keeps the first four convolution stages of the VGG16 layout
(64-64 / 128-128 / 256-256-256 / 512-512-512) and drops the fifth stage
and all fully-connected layers.  Stages 2 and 4 each feed a tap -- a 1x1
convolution of depth 11 followed by a 1x1 convolution of depth 1 -- whose
map is bilinearly resampled to the input resolution and squashed by a
sigmoid, giving the fine map OUT1 (stage 2, half resolution) and the
coarse map OUT2 (stage 4, eighth resolution).
"""

from __future__ import annotations

import torch
import torch.nn as nn
import torch.nn.functional as F

# full VGG16 convolutional backbone, for the parameter-count contract
VGG16_BACKBONE_PARAMS = 14_714_688


def _stage(channels_in: int, channels_out: int, convs: int) -> nn.Sequential:
    layers: list[nn.Module] = []
    for i in range(convs):
        layers.append(nn.Conv2d(channels_in if i == 0 else channels_out,
                                channels_out, kernel_size=3, padding=1))
        layers.append(nn.ReLU(inplace=True))
    return nn.Sequential(*layers)


class _Tap(nn.Module):
    def __init__(self, channels: int):
        super().__init__()
        self.reduce = nn.Conv2d(channels, 11, kernel_size=1)
        self.score = nn.Conv2d(11, 1, kernel_size=1)
        # zero-started side outputs: the net begins at sigmoid(0) = 0.5
        # everywhere, which keeps the first unnormalized-VGG updates tame
        nn.init.zeros_(self.score.weight)
        nn.init.zeros_(self.score.bias)

    def forward(self, x, size):
        x = self.score(self.reduce(x))
        return F.interpolate(x, size=size, mode="bilinear", align_corners=False)


class EdgeNet(nn.Module):
    """Two-tap edge detector; forward returns pre-sigmoid activations."""

    def __init__(self):
        super().__init__()
        self.stage1 = _stage(3, 64, 2)
        self.pool1 = nn.MaxPool2d(2)
        self.stage2 = _stage(64, 128, 2)
        self.pool2 = nn.MaxPool2d(2)
        self.stage3 = _stage(128, 256, 3)
        self.pool3 = nn.MaxPool2d(2)
        self.stage4 = _stage(256, 512, 3)
        self.tap2 = _Tap(128)
        self.tap4 = _Tap(512)

    def forward(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        size = x.shape[-2:]
        s1 = self.stage1(x)
        s2 = self.stage2(self.pool1(s1))
        s3 = self.stage3(self.pool2(s2))
        s4 = self.stage4(self.pool3(s3))
        return self.tap2(s2, size), self.tap4(s4, size)

    @torch.no_grad()
    def predict(self, image: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """OUT1/OUT2 probability maps for a (H, W) image tensor in [0, 1]."""
        x = image.reshape(1, 1, *image.shape).repeat(1, 3, 1, 1)
        x1, x2 = self.forward(x)
        return torch.sigmoid(x1)[0, 0], torch.sigmoid(x2)[0, 0]


def build_net(seed: int = 0, init_weights: str | None = None) -> EdgeNet:
    """Fresh network: pretrained backbone when a weights file is given,
    fixed-seed random initialization otherwise."""
    torch.manual_seed(seed)
    net = EdgeNet()
    if init_weights:
        state = torch.load(init_weights, map_location="cpu", weights_only=True)
        net.load_state_dict(state)
    return net


def parameter_count(net: nn.Module) -> int:
    return sum(p.numel() for p in net.parameters())
