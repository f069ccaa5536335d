"""Synthetic four-class data and MNIST (IDX format) ingestion."""

from __future__ import annotations

import gzip
import struct
from pathlib import Path
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .model import Dataset

# class k + 1 is centered at ANCHORS[k]
ANCHORS = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])

IDX_IMAGES_MAGIC = 2051
IDX_LABELS_MAGIC = 2049


class Split(NamedTuple):
    """Raw train/test arrays. Kept as arrays because noise 0 repeats points."""

    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray

    def datasets(self) -> tuple:
        return Dataset(self.train_x, self.train_y), Dataset(self.test_x, self.test_y)


def gen_data(noise_std: float, n: int = 400, seed: int = 0) -> Split:
    """``n`` points of four Gaussian blobs labelled 1..4, split half/half.

    Classes are balanced (cycled, then shuffled). The first ceil(n/2) points
    of the shuffled sample form the training set.
    """
    if noise_std < 0:
        raise ValueError("noise_std must be nonnegative")
    if n < 2:
        raise ValueError("need at least two points")
    rng = np.random.default_rng(seed)
    labels = rng.permutation(np.arange(n) % 4)
    X = ANCHORS[labels] + noise_std * rng.normal(size=(n, 2))
    Y = labels + 1.0
    k = (n + 1) // 2
    return Split(X[:k], Y[:k], X[k:], Y[k:])


def _read_bytes(path) -> bytes:
    path = Path(path)
    raw = path.read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return raw


def read_idx_images(path) -> np.ndarray:
    """Images as floats in [0, 1], shape (count, rows * cols)."""
    raw = _read_bytes(path)
    if len(raw) < 16:
        raise ValueError(f"{path}: truncated IDX header")
    magic, count, rows, cols = struct.unpack(">IIII", raw[:16])
    if magic != IDX_IMAGES_MAGIC:
        raise ValueError(f"{path}: bad magic {magic} (expected {IDX_IMAGES_MAGIC})")
    size = count * rows * cols
    if len(raw) < 16 + size:
        raise ValueError(f"{path}: truncated file, expected {size} pixel bytes")
    pixels = np.frombuffer(raw, dtype=np.uint8, count=size, offset=16)
    return pixels.reshape(count, rows * cols).astype(float) / 255.0


def read_idx_labels(path) -> np.ndarray:
    raw = _read_bytes(path)
    if len(raw) < 8:
        raise ValueError(f"{path}: truncated IDX header")
    magic, count = struct.unpack(">II", raw[:8])
    if magic != IDX_LABELS_MAGIC:
        raise ValueError(f"{path}: bad magic {magic} (expected {IDX_LABELS_MAGIC})")
    if len(raw) < 8 + count:
        raise ValueError(f"{path}: truncated file, expected {count} labels")
    return np.frombuffer(raw, dtype=np.uint8, count=count, offset=8).astype(int)


def write_idx(images_path, labels_path, images: np.ndarray, labels) -> None:
    """Write uint8 images (count, rows, cols) and labels in IDX format."""
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    count, rows, cols = images.shape
    Path(images_path).write_bytes(struct.pack(">IIII", IDX_IMAGES_MAGIC, count, rows, cols) + images.tobytes())
    Path(labels_path).write_bytes(struct.pack(">II", IDX_LABELS_MAGIC, labels.size) + labels.tobytes())


def mnist_import(
    images_path, labels_path, keep_labels: Iterable[int] = (0, 1, 2),
    count: Optional[int] = None, seed: int = 0, exclude: Optional[np.ndarray] = None,
) -> tuple:
    """Seeded subset of an IDX image/label pair.

    Keeps samples whose label is in ``keep_labels``, shuffles them with
    ``seed`` and takes the first ``count``. Duplicate images are dropped
    (the first occurrence stays), since features must be distinct. Indices
    in ``exclude`` are skipped, which lets a test set avoid the training
    samples. Returns ``(dataset, source_indices)``.
    """
    X = read_idx_images(images_path)
    y = read_idx_labels(labels_path)
    if X.shape[0] != y.size:
        raise ValueError(f"{X.shape[0]} images but {y.size} labels")
    keep = np.isin(y, list(keep_labels))
    if exclude is not None:
        keep[np.asarray(exclude, dtype=int)] = False
    idx = np.flatnonzero(keep)
    idx = idx[np.random.default_rng(seed).permutation(idx.size)]
    _, first = np.unique(X[idx], axis=0, return_index=True)
    idx = idx[np.sort(first)]
    if count is not None:
        if count > idx.size:
            raise ValueError(f"requested {count} samples but only {idx.size} are available")
        idx = idx[:count]
    return Dataset(X[idx], y[idx].astype(float)), idx
