"""Command-line entry point for batch segmentation, evaluation, and
phantom corpus generation.

Exit codes are a stable contract: 0 on success, 1 when any image failed
to process (the batch still finishes), 2 for usage or manifest errors.
Set ``BOUNDARY_PATH_LOG=info`` or ``debug`` for progress logging.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import dataclasses
import json
import logging
import os
import re
import sys

import numpy as np

from . import phantom as phantom_mod
from .errors import ManifestMismatch, PectsegError
from .metrics import compute_metrics, confusion, format_csv
from .morphology import CompletionParams
from .pipeline import PipelineConfig, breast_foreground, segment
from .raster_io import (
    read_gray_image,
    read_mask,
    read_prob_map,
    write_gray_image,
    write_mask,
    write_prob_map,
)

log = logging.getLogger("pectseg")

USAGE_ERROR = 2


@dataclasses.dataclass(frozen=True)
class ManifestEntry:
    image: str
    out1: str
    out2: str
    ground_truth: str | None
    stem: str


def _sanitize(rel_path: str) -> str:
    stem = os.path.splitext(rel_path)[0]
    return re.sub(r"[^A-Za-z0-9_-]+", "_", stem).strip("_")


def read_manifest(path: str) -> list[ManifestEntry]:
    """Parse a run manifest: one image per line, whitespace-separated
    columns ``image out1 out2 [ground_truth]``, paths relative to the
    manifest file, '#' comments allowed."""
    base = os.path.dirname(os.path.abspath(path))
    entries: list[ManifestEntry] = []
    stems: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) not in (3, 4):
                raise ManifestMismatch(
                    f"{path}:{line_no}: expected 3 or 4 columns, found {len(fields)}"
                )
            rel_image = fields[0]
            resolved = [
                f if os.path.isabs(f) else os.path.join(base, f) for f in fields
            ]
            for p in resolved:
                if not os.path.isfile(p):
                    raise ManifestMismatch(f"{path}:{line_no}: missing file {p}")
            stem = _sanitize(rel_image)
            if stem in stems:
                raise ManifestMismatch(
                    f"{path}:{line_no}: output stem {stem!r} collides with an earlier entry"
                )
            stems.add(stem)
            entries.append(
                ManifestEntry(
                    image=resolved[0],
                    out1=resolved[1],
                    out2=resolved[2],
                    ground_truth=resolved[3] if len(fields) == 4 else None,
                    stem=stem,
                )
            )
    return entries


def _process_entry(entry: ManifestEntry, cfg: PipelineConfig, out_dir: str):
    """Segment one manifest entry and write its masks and report.

    Returns (stem, error_message_or_None); writes are atomic so a crash
    or a parallel sibling never leaves partial files behind.
    """
    try:
        try:
            image = read_gray_image(entry.image)
            out1 = read_prob_map(entry.out1)
            out2 = read_prob_map(entry.out2)
        except PectsegError as err:
            if err.stage is None:
                err.stage = "read"
            raise
        result = segment(image, out1, out2, cfg)
        try:
            foreground = breast_foreground(image)
        except PectsegError as err:
            if err.stage is None:
                err.stage = "foreground"
            raise
        breast = foreground & ~result.pectoral_mask
        write_mask(os.path.join(out_dir, "pectoral", entry.stem + ".pgm"),
                   result.pectoral_mask)
        write_mask(os.path.join(out_dir, "breast", entry.stem + ".pgm"), breast)
        lines = [f"image={entry.stem}"]
        lines += [f"{k}={v}" for k, v in result.run_report.items()]
        lines.append(f"foreground.pixels={int(foreground.sum())}")
        report_path = os.path.join(out_dir, "reports", entry.stem + ".txt")
        blob = ("\n".join(lines) + "\n").encode("utf-8")
        tmp = f"{report_path}.tmp.{os.getpid()}"
        with open(tmp, "wb") as fh:
            fh.write(blob)
        os.replace(tmp, report_path)
        return entry.stem, None
    except (PectsegError, OSError, ValueError) as err:
        return entry.stem, str(err)


def cmd_segment(args) -> int:
    try:
        entries = read_manifest(args.manifest)
    except (OSError, ManifestMismatch) as err:
        print(f"manifest error: {err}", file=sys.stderr)
        return USAGE_ERROR
    if not entries:
        print("manifest error: no entries", file=sys.stderr)
        return USAGE_ERROR

    cfg = PipelineConfig(
        fusion_source=args.fusion_source,
        completion=CompletionParams(arc_distance=args.arc_distance),
        threshold_override=args.threshold,
    )
    for sub in ("pectoral", "breast", "reports"):
        os.makedirs(os.path.join(args.out_dir, sub), exist_ok=True)

    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(
                pool.map(_process_entry, entries,
                         [cfg] * len(entries), [args.out_dir] * len(entries))
            )
    else:
        results = [_process_entry(e, cfg, args.out_dir) for e in entries]

    failures = [(stem, msg) for stem, msg in results if msg is not None]
    for stem, msg in failures:
        print(f"FAILED {stem}: {msg}", file=sys.stderr)
    log.info("segmented %d images, %d failed", len(entries), len(failures))
    return 1 if failures else 0


def cmd_evaluate(args) -> int:
    try:
        pred_names = sorted(
            f for f in os.listdir(args.pred_dir) if f.endswith(".pgm")
        )
        gt_names = sorted(f for f in os.listdir(args.gt_dir) if f.endswith(".pgm"))
    except OSError as err:
        print(f"manifest error: {err}", file=sys.stderr)
        return USAGE_ERROR
    if pred_names != gt_names:
        only_pred = sorted(set(pred_names) - set(gt_names))
        only_gt = sorted(set(gt_names) - set(pred_names))
        print(
            "manifest error: file names differ between directories "
            f"(only predictions: {only_pred[:5]}, only ground truth: {only_gt[:5]})",
            file=sys.stderr,
        )
        return USAGE_ERROR
    if not gt_names:
        print("manifest error: no mask files to evaluate", file=sys.stderr)
        return USAGE_ERROR

    rows = []
    failures = []
    for name in gt_names:
        try:
            predicted = read_mask(os.path.join(args.pred_dir, name))
            truth = read_mask(os.path.join(args.gt_dir, name))
            rows.append((name[: -len(".pgm")], compute_metrics(confusion(predicted, truth))))
        except PectsegError as err:
            failures.append((name, str(err)))
    for name, msg in failures:
        print(f"FAILED {name}: {msg}", file=sys.stderr)

    csv_text = format_csv(rows)
    tmp = f"{args.out}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(csv_text)
    os.replace(tmp, args.out)
    log.info("evaluated %d mask pairs -> %s", len(rows), args.out)
    return 1 if failures else 0


def cmd_synth(args) -> int:
    if args.count < 1:
        print("usage error: --count must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    os.makedirs(args.out_dir, exist_ok=True)
    manifest_lines = []
    for i in range(args.count):
        spec = phantom_mod.scenario_spec(args.scenario, args.seed, i, size=args.size)
        image, gt_boundary, gt_breast, out1, out2 = phantom_mod.generate(spec)
        name = f"phantom_{i:04d}"
        sub = os.path.join(args.out_dir, name)
        os.makedirs(sub, exist_ok=True)
        write_gray_image(os.path.join(sub, "image.pgm"), image)
        write_prob_map(os.path.join(sub, "out1.epm"), out1)
        write_prob_map(os.path.join(sub, "out2.epm"), out2)
        write_mask(os.path.join(sub, "gt_breast.pgm"), gt_breast)
        boundary_mask = np.zeros(image.shape, dtype=bool)
        rows = [p[0] for p in gt_boundary.nodes]
        cols = [p[1] for p in gt_boundary.nodes]
        boundary_mask[rows, cols] = True
        write_mask(os.path.join(sub, "gt_boundary.pgm"), boundary_mask)
        record = dataclasses.asdict(spec)
        blob = json.dumps(record, indent=2, sort_keys=True) + "\n"
        tmp = os.path.join(sub, "spec.json.tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(blob)
        os.replace(tmp, os.path.join(sub, "spec.json"))
        manifest_lines.append(
            f"{name}/image.pgm {name}/out1.epm {name}/out2.epm {name}/gt_breast.pgm"
        )
        log.debug("wrote %s", sub)
    manifest_path = os.path.join(args.out_dir, "manifest.txt")
    tmp = manifest_path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    os.replace(tmp, manifest_path)
    log.info("wrote %d phantoms under %s", args.count, args.out_dir)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pectseg",
        description="Pectoral boundary reconstruction from edge-probability maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    seg = sub.add_parser("segment", help="segment a manifest of images")
    seg.add_argument("--manifest", required=True, help="run manifest file")
    seg.add_argument("--out-dir", required=True, help="output directory")
    seg.add_argument("--fusion-source", choices=("out2", "out1"), default="out2")
    seg.add_argument("--threshold", type=float, default=None,
                     help="fixed binarization threshold instead of Otsu")
    seg.add_argument("--arc-distance", type=int, default=25,
                     help="skeleton arc length used for completion fits")
    seg.add_argument("--jobs", type=int, default=1)
    seg.set_defaults(func=cmd_segment)

    ev = sub.add_parser("evaluate", help="score predicted masks against ground truth")
    ev.add_argument("--pred-dir", required=True)
    ev.add_argument("--gt-dir", required=True)
    ev.add_argument("--out", required=True, help="metrics CSV path")
    ev.set_defaults(func=cmd_evaluate)

    syn = sub.add_parser("synth", help="generate a reproducible phantom corpus")
    syn.add_argument("--count", type=int, required=True)
    syn.add_argument("--scenario", choices=phantom_mod.SCENARIOS, default="clean")
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--out-dir", required=True)
    syn.add_argument("--size", type=int, default=256)
    syn.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("BOUNDARY_PATH_LOG", "warning").upper()
    logging.basicConfig(
        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s"
    )
    log.setLevel(getattr(logging, level, logging.WARNING))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PectsegError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
