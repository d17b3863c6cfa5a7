#!/usr/bin/env python3
"""Walk one synthetic phantom through the whole reconstruction, stage by
stage, and leave every intermediate raster on disk for inspection.

Run from anywhere:  python3 demos/01_phantom_to_boundary.py
Outputs land in demo_output/walkthrough/.
"""

import os

import numpy as np

from pectseg import (
    PhantomSpec,
    binarize,
    boundary_distance,
    breast_foreground,
    complete_mask,
    compute_metrics,
    confusion,
    fuse,
    generate,
    is_disconnected,
    longest_component,
    otsu_threshold,
    segment,
    write_gray_image,
    write_mask,
)

out_dir = os.path.join("demo_output", "walkthrough")
os.makedirs(out_dir, exist_ok=True)

# A phantom with the coarse band truncated on both ends, the awkward case
# the completion stage exists for.
spec = PhantomSpec(seed=2718, size=256, out2_truncation=0.25, boundary_bend=0.3)
image, gt_boundary, gt_breast, out1, out2 = generate(spec)
write_gray_image(os.path.join(out_dir, "image.pgm"), image)
write_gray_image(os.path.join(out_dir, "out2.pgm"), (out2 * 255).astype(np.uint8))

print("== stage by stage ==")
t = otsu_threshold(out2)
print(f"Otsu threshold over the coarse map: {t:.4f}")

band = longest_component(binarize(out2, t))
left_short, right_short = is_disconnected(band)
print(f"largest component: {int(band.sum())} px, "
      f"short on left={left_short} bottom={right_short}")
write_mask(os.path.join(out_dir, "band_raw.pgm"), band)

completed = complete_mask(band)
print(f"after completion: {int(completed.sum())} px, "
      f"disconnected={is_disconnected(completed)}")
write_mask(os.path.join(out_dir, "band_completed.pgm"), completed)

fused = fuse(completed, out1, out2, added=completed & ~band)
write_gray_image(os.path.join(out_dir, "fused.pgm"), (fused * 255).astype(np.uint8))

# The one-call version of all of the above plus the path search.
result = segment(image, out1, out2)
print("\n== run report ==")
for key, value in result.run_report.items():
    print(f"  {key} = {value}")

mean_d, max_d = boundary_distance(result.boundary, gt_boundary)
print(f"\nboundary vs ground truth: mean {mean_d:.2f} px, max {max_d:.2f} px")

breast = breast_foreground(image) & ~result.pectoral_mask
report = compute_metrics(confusion(breast, gt_breast))
print(f"breast-mask DSC {report.dsc:.4f}, JAC {report.jac:.4f}")

write_mask(os.path.join(out_dir, "pectoral.pgm"), result.pectoral_mask)
write_mask(os.path.join(out_dir, "breast.pgm"), breast)

overlay = image.copy()
for r, c in result.boundary.nodes:
    overlay[r, c] = 255
write_gray_image(os.path.join(out_dir, "overlay.pgm"), overlay)
print(f"\nrasters written to {out_dir}/")
