"""Raster data model, file formats, and canonical reorientation.

All rasters are 2-D numpy arrays indexed ``[row, col]`` with row 0 at the
top of the image:

* gray images     -- ``uint8``
* probability maps -- ``float32``, every value in [0, 1]
* binary masks    -- ``bool``

Two byte-exact file formats are supported:

* PGM (binary ``P5``, maxval 255) for images and masks.  Mask files use
  the values 0 (false) and 255 (true) only.
* EPM1, a float raster for probability maps: the ASCII header
  ``EPM1\\n<width> <height>\\n`` followed by width*height little-endian
  IEEE-754 32-bit floats, row-major, top row first.

Processing happens in a canonical frame with the pectoral region at the
lower-left corner; :func:`detect_orientation` finds the flips that move an
image into that frame and :func:`apply_orientation` applies (and, applied
twice, undoes) them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousOrientation,
    FormatError,
    RangeError,
    UnsupportedDepth,
)

__all__ = [
    "Orientation",
    "read_gray_image",
    "write_gray_image",
    "read_prob_map",
    "write_prob_map",
    "read_mask",
    "write_mask",
    "detect_orientation",
    "apply_orientation",
]


@dataclass(frozen=True)
class Orientation:
    """Mirror flags that move the pectoral corner to the lower left.

    Applying the same orientation twice restores the original raster.
    """

    flip_horizontal: bool = False
    flip_vertical: bool = False


# ---------------------------------------------------------------------------
# PGM (binary P5)
# ---------------------------------------------------------------------------

def _split_header(data: bytes, n_fields: int) -> tuple[list[bytes], int]:
    """Return the first `n_fields` whitespace-separated header tokens and
    the offset of the byte right after the single whitespace character that
    terminates the last token.  '#' comments are skipped, as allowed by the
    netpbm family."""
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < n_fields:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise FormatError("truncated header")
        tokens.append(data[start:i])
    if i >= n or not data[i : i + 1].isspace():
        raise FormatError("header not terminated by whitespace")
    return tokens, i + 1


def read_gray_image(path) -> np.ndarray:
    """Decode a binary PGM ("P5", maxval 255) into a uint8 raster."""
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        tokens, offset = _split_header(data, 4)
    except FormatError:
        raise FormatError(f"{path}: not a binary PGM")
    magic, width_s, height_s, maxval_s = tokens
    if magic != b"P5":
        raise FormatError(f"{path}: bad magic {magic!r}, expected P5")
    try:
        width, height, maxval = int(width_s), int(height_s), int(maxval_s)
    except ValueError:
        raise FormatError(f"{path}: non-numeric header fields")
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedDepth(f"{path}: maxval {maxval}, only 255 supported")
    payload = data[offset:]
    if len(payload) != width * height:
        raise FormatError(
            f"{path}: expected {width * height} payload bytes, found {len(payload)}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def write_gray_image(path, image: np.ndarray) -> None:
    """Write a uint8 raster as binary PGM (P5, maxval 255)."""
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 2:
        raise FormatError("gray image must be a 2-D raster")
    height, width = image.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    _atomic_write(path, header + image.tobytes())


def read_mask(path) -> np.ndarray:
    """Decode a 0/255 PGM mask file into a bool raster."""
    raw = read_gray_image(path)
    if not np.isin(raw, (0, 255)).all():
        raise FormatError(f"{path}: mask file contains values other than 0 and 255")
    return raw == 255


def write_mask(path, mask: np.ndarray) -> None:
    """Write a bool raster as a 0/255 PGM mask file."""
    mask = np.asarray(mask, dtype=bool)
    write_gray_image(path, np.where(mask, 255, 0).astype(np.uint8))


# ---------------------------------------------------------------------------
# EPM1 (float32 probability raster)
# ---------------------------------------------------------------------------

def read_prob_map(path) -> np.ndarray:
    """Decode an EPM1 file into a float32 raster with values in [0, 1].

    Values are range-checked against [0, 1] with a 1e-6 slack for
    round-off, then clamped exactly into [0, 1].
    """
    with open(path, "rb") as fh:
        data = fh.read()
    nl1 = data.find(b"\n")
    if nl1 < 0 or data[:nl1] != b"EPM1":
        raise FormatError(f"{path}: bad magic, expected EPM1")
    nl2 = data.find(b"\n", nl1 + 1)
    if nl2 < 0:
        raise FormatError(f"{path}: truncated EPM1 header")
    dims = data[nl1 + 1 : nl2].split()
    if len(dims) != 2:
        raise FormatError(f"{path}: EPM1 dimension line must hold two fields")
    try:
        width, height = int(dims[0]), int(dims[1])
    except ValueError:
        raise FormatError(f"{path}: non-numeric EPM1 dimensions")
    if width < 1 or height < 1:
        raise FormatError(f"{path}: bad dimensions {width}x{height}")
    payload = data[nl2 + 1 :]
    expected = 4 * width * height
    if len(payload) != expected:
        raise FormatError(
            f"{path}: expected {expected} payload bytes, found {len(payload)}"
        )
    values = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    finite = np.isfinite(values)
    if not finite.all() or (values < -1e-6).any() or (values > 1 + 1e-6).any():
        raise RangeError(f"{path}: probability values outside [0, 1]")
    return np.clip(values, 0.0, 1.0).astype(np.float32)


def write_prob_map(path, prob_map: np.ndarray) -> None:
    """Write a float32 raster in [0, 1] as EPM1."""
    values = np.asarray(prob_map, dtype=np.float32)
    if values.ndim != 2:
        raise FormatError("probability map must be a 2-D raster")
    if not np.isfinite(values).all() or values.min() < 0 or values.max() > 1:
        raise RangeError("probability values outside [0, 1]")
    height, width = values.shape
    header = f"EPM1\n{width} {height}\n".encode("ascii")
    _atomic_write(path, header + values.astype("<f4").tobytes())


def _atomic_write(path, blob: bytes) -> None:
    # write-then-rename so concurrent batch items never see partial files
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Canonical orientation
# ---------------------------------------------------------------------------

def detect_orientation(image: np.ndarray) -> Orientation:
    """Find the flips that move the pectoral corner to the lower left.

    The pectoral muscle is the brightest structure touching a corner, so
    the four 25% x 25% corner windows are compared by mean intensity and
    the brightest one wins.  If all four means lie within one intensity
    level of each other the image carries no usable cue and
    :class:`AmbiguousOrientation` is raised.
    """
    image = np.asarray(image)
    if image.ndim != 2:
        raise FormatError("orientation detection expects a 2-D raster")
    h, w = image.shape
    wr = max(1, round(h * 0.25))
    wc = max(1, round(w * 0.25))
    windows = (
        (Orientation(False, False), image[h - wr :, :wc]),   # lower-left
        (Orientation(False, True), image[:wr, :wc]),         # upper-left
        (Orientation(True, False), image[h - wr :, w - wc :]),  # lower-right
        (Orientation(True, True), image[:wr, w - wc :]),     # upper-right
    )
    means = [(o, float(win.mean())) for o, win in windows]
    values = [m for _, m in means]
    if max(values) - min(values) <= 1.0:
        raise AmbiguousOrientation(
            "all corner windows have nearly equal mean intensity"
        )
    # first maximum in the fixed window order keeps the result deterministic
    best = max(means, key=lambda om: om[1])
    return best[0]


def apply_orientation(raster: np.ndarray, orientation: Orientation) -> np.ndarray:
    """Mirror a raster as flagged.  The operation is an involution."""
    out = np.asarray(raster)
    if orientation.flip_horizontal:
        out = out[:, ::-1]
    if orientation.flip_vertical:
        out = out[::-1, :]
    return np.ascontiguousarray(out)
