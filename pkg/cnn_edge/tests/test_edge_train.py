import numpy as np
import pytest
import torch

from corpus_util import make_corpus
from cnn_edge.errors import InsufficientData
from cnn_edge.model import build_net
from cnn_edge.train import TrainConfig, load_corpus, train


class TestTrain:
    def test_small_corpus_rejected(self, tmp_path):
        make_corpus(tmp_path / "c", count=5)
        net = build_net(seed=0)
        with pytest.raises(InsufficientData):
            train(str(tmp_path / "c"), net, TrainConfig(epochs=1))

    def test_zero_epochs_noop(self, tmp_path):
        make_corpus(tmp_path / "c", count=20)
        net = build_net(seed=0)
        before = [p.detach().clone() for p in net.parameters()]
        history = train(str(tmp_path / "c"), net, TrainConfig(epochs=0))
        assert history == []
        for old, new in zip(before, net.parameters()):
            assert torch.equal(old, new)

    def test_loss_decreases_on_tiny_corpus(self, tmp_path):
        make_corpus(tmp_path / "c", count=20, size=64, seed=1)
        net = build_net(seed=1)
        history = train(str(tmp_path / "c"), net, TrainConfig(epochs=3, seed=1))
        assert len(history) == 3
        assert history[-1] < history[0]

    def test_training_is_seed_deterministic(self, tmp_path):
        make_corpus(tmp_path / "c", count=20, size=48, seed=2)
        runs = []
        for _ in range(2):
            net = build_net(seed=3)
            runs.append(train(str(tmp_path / "c"), net, TrainConfig(epochs=1, seed=3)))
        assert runs[0] == runs[1]

    def test_load_corpus_sorted_and_complete(self, tmp_path):
        make_corpus(tmp_path / "c", count=7, size=32)
        pairs = load_corpus(str(tmp_path / "c"))
        assert len(pairs) == 7
        for image, label in pairs:
            assert image.shape == (32, 32)
            assert label.dtype == np.bool_

    def test_config_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(epochs=-1)
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=0.0)
