"""Segmentation quality metrics between estimated and ground-truth masks.

Seven per-image scores (Dice, Jaccard, specificity, sensitivity, accuracy,
false-positive and false-negative rates) derived from pixel confusion
counts, plus mean +/- sample standard deviation aggregation across a
dataset and CSV emission.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, ShapeError, UndefinedMetric

__all__ = [
    "ConfusionCounts",
    "MetricsReport",
    "METRIC_NAMES",
    "confusion",
    "compute_metrics",
    "aggregate",
    "format_csv",
]

METRIC_NAMES = ("dsc", "jac", "spe", "sen", "acc", "fpr", "fnr")


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    dsc: float
    jac: float
    spe: float
    sen: float
    acc: float
    fpr: float
    fnr: float
    counts: ConfusionCounts

    def value(self, name: str) -> float:
        return getattr(self, name)


def confusion(estimated, ground_truth) -> ConfusionCounts:
    """Pixelwise confusion counts of an estimated mask against its truth."""
    est = np.asarray(estimated, dtype=bool)
    ref = np.asarray(ground_truth, dtype=bool)
    if est.shape != ref.shape:
        raise ShapeError(f"mask shapes differ: {est.shape} vs {ref.shape}")
    tp = int((est & ref).sum())
    fp = int((est & ~ref).sum())
    fn = int((~est & ref).sum())
    tn = est.size - tp - fp - fn
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def compute_metrics(c: ConfusionCounts) -> MetricsReport:
    """All seven metrics from confusion counts.

    Both classes must be present in the ground-truth frame; an empty
    positive or negative class leaves metrics undefined and raises rather
    than fabricating a score.
    """
    undefined = []
    if c.tp + c.fn == 0:
        undefined += ["sen", "fnr"]
    if c.tn + c.fp == 0:
        undefined += ["spe", "fpr"]
    if undefined:
        raise UndefinedMetric(
            f"metrics {', '.join(undefined)} undefined for counts {c}"
        )
    tp, tn, fp, fn = c.tp, c.tn, c.fp, c.fn
    return MetricsReport(
        dsc=2.0 * tp / (2 * tp + fp + fn),
        jac=tp / (tp + fp + fn),
        spe=tn / (tn + fp),
        sen=tp / (tp + fn),
        acc=(tp + tn) / c.total,
        fpr=fp / (fp + tn),
        fnr=fn / (fn + tp),
        counts=c,
    )


def aggregate(reports: list[MetricsReport]) -> dict[str, tuple[float, float]]:
    """Per-metric (mean, sample standard deviation) over a dataset."""
    if len(reports) < 2:
        raise InsufficientData(
            f"aggregation needs at least 2 reports, got {len(reports)}"
        )
    out = {}
    for name in METRIC_NAMES:
        values = [r.value(name) for r in reports]
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
        out[name] = (mean, math.sqrt(var))
    return out


def format_csv(rows: list[tuple[str, MetricsReport]]) -> str:
    """Metrics table as CSV text: one row per image plus a summary row.

    Scores carry six fractional digits; the summary cells read
    ``mean+/-stddev`` and leave the raw counts blank.
    """
    lines = ["image," + ",".join(METRIC_NAMES) + ",tp,tn,fp,fn"]
    for image_id, report in rows:
        cells = [image_id]
        cells += [f"{report.value(name):.6f}" for name in METRIC_NAMES]
        c = report.counts
        cells += [str(c.tp), str(c.tn), str(c.fp), str(c.fn)]
        lines.append(",".join(cells))
    if len(rows) >= 2:
        summary = aggregate([report for _, report in rows])
        cells = ["mean±stddev"]
        cells += [f"{summary[n][0]:.6f}±{summary[n][1]:.6f}" for n in METRIC_NAMES]
        cells += ["", "", "", ""]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
