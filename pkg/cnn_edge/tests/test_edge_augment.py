import numpy as np
import pytest

from cnn_edge.augment import augment
from cnn_edge.errors import ShapeError


def sample_pair(seed=0):
    rng = np.random.default_rng(seed)
    image = rng.integers(0, 256, size=(256, 256), dtype=np.uint8)
    labels = np.zeros((256, 256), dtype=bool)
    for r in range(40, 200):
        labels[r, r // 2 + 10] = True
    return image, labels


class TestAugment:
    def test_exactly_ten_pairs_all_full_size(self):
        pairs = augment(*sample_pair())
        assert len(pairs) == 10
        for img, lab in pairs:
            assert img.shape == (256, 256)
            assert lab.shape == (256, 256)
            assert img.dtype == np.uint8
            assert lab.dtype == np.bool_

    def test_horizontal_flip_coordinates(self):
        image, labels = sample_pair()
        pairs = augment(image, labels)
        _, flipped = pairs[4]  # vertical, then horizontal flip in the fixed order
        for r, c in np.argwhere(labels):
            assert flipped[r, 255 - c]

    def test_vertical_flip_coordinates(self):
        image, labels = sample_pair()
        _, flipped = augment(image, labels)[3]
        for r, c in np.argwhere(labels):
            assert flipped[255 - r, c]

    def test_downscale_confined_to_central_window(self):
        image = np.full((256, 256), 200, dtype=np.uint8)
        labels = np.zeros((256, 256), dtype=bool)
        labels[128, 128] = True
        img9, lab9 = augment(image, labels)[1]
        pad = (256 - 230) // 2
        border = np.ones((256, 256), dtype=bool)
        border[pad : pad + 230, pad : pad + 230] = False
        assert not img9[border].any()
        assert not lab9[border].any()
        assert img9[~border].any()

    def test_image_and_label_transform_identically(self):
        image, labels = sample_pair(3)
        image = np.where(labels, 255, 0).astype(np.uint8)  # image mirrors the label
        for img, lab in augment(image, labels)[3:]:  # the seven symmetries
            assert np.array_equal(img == 255, lab)

    def test_wrong_size_rejected(self):
        with pytest.raises(ShapeError):
            augment(
                np.zeros((128, 128), dtype=np.uint8), np.zeros((128, 128), dtype=bool)
            )

    def test_symmetries_are_distinct(self):
        image, labels = sample_pair(5)
        seen = set()
        for img, _ in augment(image, labels):
            seen.add(img.tobytes())
        assert len(seen) == 10
