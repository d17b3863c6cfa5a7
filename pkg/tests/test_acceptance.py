"""Acceptance suite: every primary criterion at its stated tolerance.

Each test prints one PASS/FAIL line so a plain ``pytest -s
tests/test_acceptance.py`` doubles as the acceptance report.
"""

import time

import numpy as np
import pytest

from oracles import brute_force_path_cost, confusion_loop, otsu_exhaustive, tree_hash
from pectseg.boundary_graph import GraphConfig, shortest_path
from pectseg.cli import main as cli_main
from pectseg.errors import NoPath
from pectseg.metrics import compute_metrics, confusion
from pectseg.morphology import otsu_threshold
from pectseg.phantom import boundary_distance, generate, scenario_spec
from pectseg.pipeline import breast_foreground, segment
from pectseg.raster_io import Orientation, apply_orientation

CLEAN_SEED = 20260809
TRUNCATED_SEED = 31415
EPS = GraphConfig().epsilon


def _report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_dijkstra_optimality_against_brute_force():
    rng = np.random.default_rng(4242)
    start = time.perf_counter()
    exact = 0
    unreachable = 0
    for _ in range(100):
        M = rng.choice(np.arange(0.1, 1.05, 0.1), size=(5, 5)).astype(np.float32)
        B = rng.random((5, 5)) < 0.8
        S = (int(rng.integers(0, 5)), int(rng.integers(0, 5)))
        E = (int(rng.integers(0, 5)), int(rng.integers(0, 5)))
        B[S] = B[E] = True
        expected = brute_force_path_cost(M, B, S, E, EPS)
        if expected is None:
            with pytest.raises(NoPath):
                shortest_path(M, B, S, E)
            unreachable += 1
        else:
            assert shortest_path(M, B, S, E).total_cost == expected
            exact += 1
    elapsed = time.perf_counter() - start
    _report(
        "dijkstra-optimality",
        exact + unreachable == 100 and elapsed < 5.0,
        f"{exact} exact matches, {unreachable} no-path cases, {elapsed:.2f}s (< 5s)",
    )


def test_otsu_matches_exhaustive_search():
    rng = np.random.default_rng(515)
    start = time.perf_counter()
    for _ in range(100):
        m = rng.random((16, 16), dtype=np.float32)
        assert otsu_threshold(m) == otsu_exhaustive(m.astype(np.float64))
    elapsed = time.perf_counter() - start
    _report("otsu-oracle", elapsed < 1.0, f"100 exact matches, {elapsed:.2f}s (< 1s)")


def test_metric_identities_and_confusion_oracle():
    rng = np.random.default_rng(99)
    worst = 0.0
    for i in range(1000):
        est = rng.random((32, 32)) > rng.uniform(0.2, 0.8)
        ref = rng.random((32, 32)) > rng.uniform(0.2, 0.8)
        c = confusion(est, ref)
        if i < 50:  # the Python pixel loop is slow; spot-check a prefix fully
            assert (c.tp, c.tn, c.fp, c.fn) == confusion_loop(est, ref)
        if c.tp + c.fn == 0 or c.tn + c.fp == 0:
            continue
        m = compute_metrics(c)
        worst = max(
            worst,
            abs(m.dsc - 2 * m.jac / (1 + m.jac)),
            abs(m.sen + m.fnr - 1.0),
            abs(m.spe + m.fpr - 1.0),
        )
    _report("metric-identities", worst < 1e-12, f"max identity residual {worst:.2e} (< 1e-12)")


def _run_corpus(scenario, seed, count):
    distances = []
    dscs = []
    completions = 0
    for i in range(count):
        spec = scenario_spec(scenario, seed=seed, index=i)
        image, gt_boundary, gt_breast, out1, out2 = generate(spec)
        result = segment(image, out1, out2)
        mean_dist, _ = boundary_distance(result.boundary, gt_boundary)
        distances.append(mean_dist)
        breast = breast_foreground(image) & ~result.pectoral_mask
        dscs.append(compute_metrics(confusion(breast, gt_breast)).dsc)
        if result.run_report["complete.applied"] == "true":
            completions += 1
    return distances, dscs, completions


def test_clean_phantom_corpus():
    start = time.perf_counter()
    distances, dscs, _ = _run_corpus("clean", CLEAN_SEED, 50)
    elapsed = time.perf_counter() - start
    mean_dist = float(np.mean(distances))
    mean_dsc = float(np.mean(dscs))
    _report(
        "clean-corpus",
        mean_dist <= 1.5 and mean_dsc >= 0.95 and elapsed < 60.0,
        f"mean boundary distance {mean_dist:.3f}px (<= 1.5), "
        f"mean DSC {mean_dsc:.4f} (>= 0.95), {elapsed:.1f}s (< 60s)",
    )


def test_truncated_phantom_corpus():
    distances, dscs, completions = _run_corpus("truncated", TRUNCATED_SEED, 50)
    mean_dsc = float(np.mean(dscs))
    _report(
        "truncated-corpus",
        completions == 50 and mean_dsc >= 0.90,
        f"completion on {completions}/50 cases, mean DSC {mean_dsc:.4f} (>= 0.90), "
        f"no NoPath failures",
    )


def test_orientation_equivariance():
    mismatches = 0
    flips = (Orientation(True, False), Orientation(False, True), Orientation(True, True))
    for i in range(20):
        spec = scenario_spec("clean", seed=606, index=i)
        image, _, _, out1, out2 = generate(spec)
        base = segment(image, out1, out2)
        for orientation in flips:
            result = segment(
                apply_orientation(image, orientation),
                apply_orientation(out1, orientation),
                apply_orientation(out2, orientation),
            )
            same = np.array_equal(
                result.pectoral_mask, apply_orientation(base.pectoral_mask, orientation)
            ) and np.array_equal(
                result.breast_mask, apply_orientation(base.breast_mask, orientation)
            )
            mismatches += 0 if same else 1
    _report(
        "orientation-equivariance",
        mismatches == 0,
        f"20 phantoms x 3 flips, {mismatches} mask mismatches",
    )


def test_batch_determinism(tmp_path):
    corpus = tmp_path / "corpus"
    assert cli_main([
        "synth", "--count", "6", "--scenario", "truncated",
        "--seed", "77", "--out-dir", str(corpus),
    ]) == 0
    runs = []
    for name in ("one", "two"):
        out = tmp_path / name
        assert cli_main([
            "segment", "--manifest", str(corpus / "manifest.txt"),
            "--out-dir", str(out),
        ]) == 0
        runs.append(tree_hash(out))
    _report(
        "batch-determinism",
        runs[0] == runs[1] and len(runs[0]) == 18,
        f"two cmd_segment runs, {len(runs[0])} files each, byte-identical trees",
    )
