"""Dataset access for the training harness.

Real datasets (mnist, fmnist) are read from IDX files downloaded
out-of-band into a data directory (SVMTRAIN_DATA or --data-dir):

    train-images-idx3-ubyte[.gz]   train-labels-idx1-ubyte[.gz]
    t10k-images-idx3-ubyte[.gz]    t10k-labels-idx1-ubyte[.gz]

for mnist, and the same names under an fmnist/ subdirectory (or
fashion- prefixed).  Missing files raise DatasetMissing.

Two bundled surrogates keep the pipeline testable offline:

* ``digits``: scikit-learn's 8x8 digit images, scaled to [0,1].
* ``digits-border``: the same images rolled by half their size, so the
  class information sits on the image border; used for directional
  border-occlusion experiments (a stand-in for datasets whose borders
  carry information).
"""

from __future__ import annotations

import gzip
import os
import struct
from pathlib import Path

import numpy as np

__all__ = ["DatasetMissing", "load_split", "REAL_DATASETS", "SURROGATES"]

REAL_DATASETS = ("mnist", "fmnist")
SURROGATES = ("digits", "digits-border")

_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


class DatasetMissing(FileNotFoundError):
    pass


def _find(data_dir: Path, dataset: str, name: str) -> Path:
    candidates = []
    for stem in (name, name + ".gz"):
        candidates.append(data_dir / dataset / stem)
        if dataset == "fmnist":
            candidates.append(data_dir / ("fashion-" + stem))
        if dataset == "mnist":
            candidates.append(data_dir / stem)
    for c in candidates:
        if c.exists():
            return c
    raise DatasetMissing(
        f"{dataset}: {name} not found under {data_dir} "
        f"(download the IDX files out-of-band)")


def _read_idx_images(path: Path) -> np.ndarray:
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        magic, count, rows, cols = struct.unpack(">IIII", fh.read(16))
        if magic != 0x803:
            raise ValueError(f"{path}: bad images magic 0x{magic:08x}")
        raw = fh.read(count * rows * cols)
    data = np.frombuffer(raw, dtype=np.uint8).reshape(count, rows * cols)
    return data.astype(np.float64) / 255.0


def _read_idx_labels(path: Path) -> np.ndarray:
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rb") as fh:
        magic, count = struct.unpack(">II", fh.read(8))
        if magic != 0x801:
            raise ValueError(f"{path}: bad labels magic 0x{magic:08x}")
        raw = fh.read(count)
    return np.frombuffer(raw, dtype=np.uint8).astype(int)


def _digits(border: bool):
    from sklearn.datasets import load_digits

    d = load_digits()
    X = d.data / 16.0
    y = d.target.astype(int)
    # embed each 8x8 digit in a 16x16 canvas: centered (border pixels
    # carry no information, like the handwritten-digit images) or
    # rolled into the corners (borders carry the ink, like the fashion
    # images whose borders are informative)
    imgs = X.reshape(-1, 8, 8)
    canvas = np.zeros((imgs.shape[0], 16, 16))
    canvas[:, 4:12, 4:12] = imgs
    if border:
        canvas = np.roll(np.roll(canvas, 8, axis=1), 8, axis=2)
    X = canvas.reshape(-1, 256)
    # fixed split: first 1297 train, last 500 test
    return (X[:1297], y[:1297]), (X[1297:], y[1297:])


def load_split(dataset: str, data_dir=None):
    """((X_train, y_train), (X_test, y_test)) with features in [0,1]."""
    if dataset in SURROGATES:
        return _digits(border=dataset == "digits-border")
    if dataset not in REAL_DATASETS:
        raise ValueError(f"unknown dataset {dataset!r}")
    data_dir = Path(data_dir or os.environ.get("SVMTRAIN_DATA", "data"))
    out = []
    for split in ("train", "test"):
        img_name, lab_name = _FILES[split]
        X = _read_idx_images(_find(data_dir, dataset, img_name))
        y = _read_idx_labels(_find(data_dir, dataset, lab_name))
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{dataset} {split}: image/label counts disagree")
        out.append((X, y))
    return tuple(out)
