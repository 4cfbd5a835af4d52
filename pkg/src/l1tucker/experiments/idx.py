"""Reader for the IDX image/label container (the MNIST distribution format).

Headers are big-endian: magic 0x00000803 for an image file (followed by
count, rows, cols) and 0x00000801 for a label file (followed by count);
payloads are unsigned bytes. Files with a ``.gz`` suffix are decompressed
transparently.
"""
from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

from ..errors import FormatError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


class IdxFormatError(FormatError):
    pass


def _read_bytes(path) -> bytes:
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as fh:
            return fh.read()
    return path.read_bytes()


def _header(buf: bytes, n_fields: int, path) -> tuple[int, ...]:
    need = 4 * (1 + n_fields)
    if len(buf) < need:
        raise IdxFormatError(f"{path}: truncated header", len(buf))
    return struct.unpack(f">{1 + n_fields}I", buf[:need])


def _payload(buf: bytes, offset: int, count: int, path) -> np.ndarray:
    if len(buf) < offset + count:
        raise IdxFormatError(f"{path}: truncated payload", len(buf))
    if len(buf) > offset + count:
        raise IdxFormatError(f"{path}: trailing bytes", offset + count)
    return np.frombuffer(buf, dtype=np.uint8, count=count, offset=offset)


def load_idx_images(images_path, labels_path) -> tuple[np.ndarray, np.ndarray]:
    """Load an IDX image/label file pair.

    Returns ``(images, labels)`` with images ``(count, rows, cols)`` float64
    in [0, 255] and labels ``(count,)`` int64. Raises :class:`IdxFormatError`
    on a bad magic, truncation, or an image/label count mismatch.
    """
    buf = _read_bytes(images_path)
    magic, count, rows, cols = _header(buf, 3, images_path)
    if magic != IMAGE_MAGIC:
        raise IdxFormatError(f"{images_path}: bad image magic 0x{magic:08x}", 0)
    pixels = _payload(buf, 16, count * rows * cols, images_path)
    images = pixels.reshape(count, rows, cols).astype(np.float64)

    buf = _read_bytes(labels_path)
    magic, label_count = _header(buf, 1, labels_path)
    if magic != LABEL_MAGIC:
        raise IdxFormatError(f"{labels_path}: bad label magic 0x{magic:08x}", 0)
    labels = _payload(buf, 8, label_count, labels_path).astype(np.int64)

    if count != label_count:
        raise IdxFormatError(
            f"{images_path}: {count} images but {label_count} labels"
        )
    return images, labels


def _find(directory: Path, stem: str) -> Path:
    for name in (stem, stem + ".gz"):
        candidate = directory / name
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"{directory}: missing {stem}[.gz]")


def load_mnist_dir(directory) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Load the standard four MNIST files from ``directory``.

    Returns ``(train, test)`` where each element is an ``(images, labels)``
    pair as produced by :func:`load_idx_images`.
    """
    directory = Path(directory)
    train = load_idx_images(
        _find(directory, "train-images-idx3-ubyte"),
        _find(directory, "train-labels-idx1-ubyte"),
    )
    test = load_idx_images(
        _find(directory, "t10k-images-idx3-ubyte"),
        _find(directory, "t10k-labels-idx1-ubyte"),
    )
    return train, test
