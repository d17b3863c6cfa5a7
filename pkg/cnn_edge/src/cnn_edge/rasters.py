"""PGM and EPM1 readers/writers for the wire formats shared with the
segmentation engine.

PGM is binary P5 with maxval 255.  EPM1 is the probability-raster format:
the ASCII header ``EPM1\\n<width> <height>\\n`` followed by width*height
little-endian float32 values, row-major, top row first, all in [0, 1].
"""

from __future__ import annotations

import os

import numpy as np

from .errors import FormatError, RangeError


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    fields: list[bytes] = []
    i = 0
    while len(fields) < 4:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i] != 0x0A:
                i += 1
            continue
        start = i
        while i < len(data) and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise FormatError(f"{path}: truncated PGM header")
        fields.append(data[start:i])
    if fields[0] != b"P5":
        raise FormatError(f"{path}: not a binary PGM")
    try:
        width, height, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    except ValueError:
        raise FormatError(f"{path}: non-numeric PGM header")
    if maxval != 255:
        raise FormatError(f"{path}: unsupported maxval {maxval}")
    payload = data[i + 1 :]
    if len(payload) != width * height:
        raise FormatError(f"{path}: wrong payload size")
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, image: np.ndarray) -> None:
    image = np.asarray(image, dtype=np.uint8)
    height, width = image.shape
    blob = f"P5\n{width} {height}\n255\n".encode("ascii") + image.tobytes()
    _atomic_write(path, blob)


def read_label_mask(path) -> np.ndarray:
    """0/255 PGM label file as a bool raster."""
    raw = read_pgm(path)
    if not np.isin(raw, (0, 255)).all():
        raise FormatError(f"{path}: label mask must contain only 0 and 255")
    return raw == 255


def write_epm(path, values: np.ndarray) -> None:
    values = np.asarray(values, dtype=np.float32)
    if values.ndim != 2:
        raise FormatError("EPM raster must be 2-D")
    if not np.isfinite(values).all() or values.min() < 0 or values.max() > 1:
        raise RangeError("EPM values outside [0, 1]")
    height, width = values.shape
    blob = f"EPM1\n{width} {height}\n".encode("ascii") + values.astype("<f4").tobytes()
    _atomic_write(path, blob)


def read_epm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    nl1 = data.find(b"\n")
    if nl1 < 0 or data[:nl1] != b"EPM1":
        raise FormatError(f"{path}: bad EPM1 magic")
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
    if len(payload) != 4 * width * height:
        raise FormatError(f"{path}: wrong EPM1 payload size")
    values = np.frombuffer(payload, dtype="<f4").reshape(height, width)
    if not np.isfinite(values).all() or values.min() < -1e-6 or values.max() > 1 + 1e-6:
        raise RangeError(f"{path}: values outside [0, 1]")
    return np.clip(values, 0.0, 1.0).astype(np.float32)


def _atomic_write(path, blob: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(blob)
    os.replace(tmp, path)
