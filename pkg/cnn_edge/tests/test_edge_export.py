import os

from corpus_util import make_corpus, make_phantom
from cnn_edge.export import export_maps, find_images
from cnn_edge.model import build_net
from cnn_edge.rasters import read_epm, write_pgm


class TestExport:
    def test_untrained_net_still_writes_valid_epm(self, tmp_path):
        images = tmp_path / "imgs"
        images.mkdir()
        image, _ = make_phantom(0, size=48)
        write_pgm(images / "one.pgm", image)
        out = tmp_path / "maps"
        written, skipped = export_maps(build_net(seed=0), str(images), str(out))
        assert written == ["one"]
        assert skipped == []
        for tap in ("out1", "out2"):
            m = read_epm(out / f"one.{tap}.epm")
            assert m.shape == (48, 48)
            assert 0.0 <= float(m.min()) and float(m.max()) <= 1.0

    def test_batch_of_ten_gives_twenty_files(self, tmp_path):
        images = tmp_path / "imgs"
        images.mkdir()
        for i in range(10):
            image, _ = make_phantom(i, size=32)
            write_pgm(images / f"img_{i:02d}.pgm", image)
        out = tmp_path / "maps"
        written, skipped = export_maps(build_net(seed=1), str(images), str(out))
        assert len(written) == 10 and not skipped
        files = sorted(os.listdir(out))
        assert len(files) == 20
        assert "img_03.out1.epm" in files and "img_03.out2.epm" in files

    def test_corpus_layout_stems(self, tmp_path):
        make_corpus(tmp_path / "c", count=2, size=32)
        found = find_images(str(tmp_path / "c"))
        assert [stem for stem, _ in found] == [
            "phantom_0000_image",
            "phantom_0001_image",
        ]

    def test_unreadable_image_skipped_with_report(self, tmp_path):
        images = tmp_path / "imgs"
        images.mkdir()
        good, _ = make_phantom(1, size=32)
        write_pgm(images / "good.pgm", good)
        (images / "bad.pgm").write_bytes(b"P5\n4 4\n255\nxx")  # truncated
        out = tmp_path / "maps"
        written, skipped = export_maps(build_net(seed=0), str(images), str(out))
        assert written == ["good"]
        assert len(skipped) == 1
        assert "bad.pgm" in skipped[0][0]
        assert len(os.listdir(out)) == 2
