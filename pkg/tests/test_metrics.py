import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import confusion_loop, mean_std_two_pass
from pectseg.errors import InsufficientData, ShapeError, UndefinedMetric
from pectseg.metrics import (
    METRIC_NAMES,
    ConfusionCounts,
    aggregate,
    compute_metrics,
    confusion,
    format_csv,
)


def random_report(rng):
    tp = int(rng.integers(1, 50))
    fn = int(rng.integers(0, 50))
    fp = int(rng.integers(0, 50))
    tn = int(rng.integers(1, 50))
    return compute_metrics(ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn))


class TestConfusion:
    def test_identity(self):
        rng = np.random.default_rng(1)
        mask = rng.random((9, 9)) > 0.5
        c = confusion(mask, mask)
        assert c.fp == 0 and c.fn == 0
        assert c.tp == int(mask.sum())

    def test_complement(self):
        rng = np.random.default_rng(2)
        mask = rng.random((9, 9)) > 0.5
        c = confusion(mask, ~mask)
        assert c.tp == 0 and c.tn == 0

    def test_matches_pixel_loop(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            est = rng.random((8, 8)) > 0.5
            ref = rng.random((8, 8)) > 0.5
            c = confusion(est, ref)
            assert (c.tp, c.tn, c.fp, c.fn) == confusion_loop(est, ref)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            confusion(np.zeros((2, 2), bool), np.zeros((3, 2), bool))

    def test_counts_sum_to_area(self):
        rng = np.random.default_rng(4)
        est = rng.random((11, 7)) > 0.3
        ref = rng.random((11, 7)) > 0.7
        assert confusion(est, ref).total == 77


class TestComputeMetrics:
    def test_reference_counts(self):
        m = compute_metrics(ConfusionCounts(tp=4, fp=2, fn=2, tn=8))
        assert m.dsc == pytest.approx(0.666667, abs=5e-7)
        assert m.jac == pytest.approx(0.5)
        assert m.sen == pytest.approx(0.666667, abs=5e-7)
        assert m.spe == pytest.approx(0.8)
        assert m.acc == pytest.approx(0.75)
        assert m.fpr == pytest.approx(0.2)
        assert m.fnr == pytest.approx(0.333333, abs=5e-7)

    def test_perfect_match(self):
        m = compute_metrics(ConfusionCounts(tp=10, tn=20, fp=0, fn=0))
        assert m.dsc == m.jac == m.sen == m.spe == m.acc == 1.0
        assert m.fpr == m.fnr == 0.0

    def test_disjoint_masks(self):
        m = compute_metrics(ConfusionCounts(tp=0, fp=5, fn=7, tn=4))
        assert m.dsc == 0.0 and m.jac == 0.0

    def test_empty_positive_class(self):
        with pytest.raises(UndefinedMetric, match="sen.*fnr"):
            compute_metrics(ConfusionCounts(tp=0, fn=0, fp=3, tn=5))

    def test_empty_negative_class(self):
        with pytest.raises(UndefinedMetric, match="spe.*fpr"):
            compute_metrics(ConfusionCounts(tp=4, fn=1, fp=0, tn=0))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=60, deadline=None)
    def test_identities(self, seed):
        rng = np.random.default_rng(seed)
        m = random_report(rng)
        assert abs(m.dsc - 2 * m.jac / (1 + m.jac)) < 1e-12
        assert abs(m.sen + m.fnr - 1.0) < 1e-12
        assert abs(m.spe + m.fpr - 1.0) < 1e-12
        c = m.counts
        assert abs(m.acc - (c.tp + c.tn) / c.total) < 1e-12
        for name in METRIC_NAMES:
            assert 0.0 <= m.value(name) <= 1.0

    def test_dice_symmetry(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            a = rng.random((8, 8)) > 0.4
            b = rng.random((8, 8)) > 0.6
            if not (a & b).any() or not a.any() or not b.any():
                continue
            if (a | b).all() or (~a & ~b).sum() == 0:
                continue
            try:
                fa = compute_metrics(confusion(a, b))
                fb = compute_metrics(confusion(b, a))
            except UndefinedMetric:
                continue
            assert fa.dsc == pytest.approx(fb.dsc, abs=1e-15)
            assert fa.jac == pytest.approx(fb.jac, abs=1e-15)

    def test_fp_to_tn_monotone(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            tp = int(rng.integers(1, 20))
            fn = int(rng.integers(0, 20))
            fp = int(rng.integers(1, 20))
            tn = int(rng.integers(1, 20))
            before = compute_metrics(ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn))
            after = compute_metrics(ConfusionCounts(tp=tp, tn=tn + 1, fp=fp - 1, fn=fn))
            assert after.spe >= before.spe
            assert after.acc >= before.acc


class TestAggregate:
    def test_two_point_formula(self):
        rng = np.random.default_rng(8)
        a = compute_metrics(ConfusionCounts(tp=9, fp=1, fn=1, tn=9))
        b = compute_metrics(ConfusionCounts(tp=10, fp=0, fn=0, tn=10))
        assert a.dsc == pytest.approx(0.9)
        assert b.dsc == pytest.approx(1.0)
        out = aggregate([a, b])
        assert out["dsc"][0] == pytest.approx(0.95)
        assert out["dsc"][1] == pytest.approx(0.070711, abs=5e-7)

    def test_identical_reports_zero_stddev(self):
        r = compute_metrics(ConfusionCounts(tp=4, fp=2, fn=2, tn=8))
        out = aggregate([r] * 5)
        for name in METRIC_NAMES:
            assert out[name][1] == 0.0

    def test_matches_two_pass_oracle(self):
        rng = np.random.default_rng(9)
        reports = [random_report(rng) for _ in range(50)]
        out = aggregate(reports)
        for name in METRIC_NAMES:
            mean, std = mean_std_two_pass([r.value(name) for r in reports])
            assert abs(out[name][0] - mean) < 1e-12
            assert abs(out[name][1] - std) < 1e-12

    def test_insufficient_data(self):
        r = compute_metrics(ConfusionCounts(tp=4, fp=2, fn=2, tn=8))
        with pytest.raises(InsufficientData):
            aggregate([r])


class TestCsv:
    def test_layout(self):
        a = compute_metrics(ConfusionCounts(tp=9, fp=1, fn=1, tn=9))
        b = compute_metrics(ConfusionCounts(tp=10, fp=0, fn=0, tn=10))
        text = format_csv([("img_a", a), ("img_b", b)])
        lines = text.strip().split("\n")
        assert lines[0].startswith("image,dsc,jac,")
        assert lines[1].startswith("img_a,0.900000,")
        assert lines[2].split(",")[1] == "1.000000"
        assert lines[3].startswith("mean±stddev,0.950000±0.070711,")
        assert lines[1].endswith("9,9,1,1")
