"""Train ovo SVM multi-classifiers and export them for verification.

The exported artifacts are exactly the files the verifier consumes: a
model in the interchange text format and a test slice in the CSV
format.  After every export the format contract is cross-validated by
running the verifier CLI on the exported files with a degenerate
(delta = 0) region and comparing its concrete predictions against the
trainer's native ones; agreement below 99.9% fails the export.
"""

from __future__ import annotations

import json
import subprocess
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.svm import SVC

from .datasets import load_split
from .export import samples_to_csv, svc_to_interchange

__all__ = ["TrainConfig", "TrainResult", "train_and_export", "verifier_predictions"]

AGREEMENT_FLOOR = 0.999


@dataclass
class TrainConfig:
    dataset: str = "mnist"          # mnist | fmnist | digits | digits-border
    subset_size: int = 1000         # typical ladder: 1k, 2k, ..., 60k
    kernel: str = "rbf"             # linear | poly | rbf
    degree: int = 3
    gamma: str | float = "scale"
    coef0: float = 0.0
    c: float = 10.0
    test_size: int = 1000
    data_dir: str | None = None
    out_dir: str = "models"

    def __post_init__(self):
        if self.subset_size < 1:
            raise ValueError("subset_size must be positive")
        if self.kernel not in ("linear", "poly", "rbf"):
            raise ValueError(f"unsupported kernel {self.kernel!r}")


@dataclass
class TrainResult:
    model_path: Path
    test_csv_path: Path
    metadata_path: Path
    metadata: dict = field(default_factory=dict)


def verifier_predictions(model_path, csv_path) -> list[int]:
    """Concrete predictions of the exported model, obtained through the
    verifier's external interface (CLI, degenerate region)."""
    with tempfile.NamedTemporaryFile(suffix=".jsonl", delete=False) as tmp:
        out_path = tmp.name
    cmd = [sys.executable, "-m", "svmcert.cli",
           "--model", str(model_path), "--dataset", str(csv_path),
           "--linf", "0", "--domain", "interval", "--out", out_path]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"verifier run failed: {proc.stderr.strip()}")
    preds = []
    with open(out_path) as fh:
        for line in fh:
            rec = json.loads(line)
            if rec.get("type") == "sample":
                preds.append(int(rec["prediction"]))
    Path(out_path).unlink(missing_ok=True)
    return preds


def train_and_export(config: TrainConfig) -> TrainResult:
    (Xtr, ytr), (Xte, yte) = load_split(config.dataset, config.data_dir)
    k = min(config.subset_size, Xtr.shape[0])
    Xtr, ytr = Xtr[:k], ytr[:k]
    t = min(config.test_size, Xte.shape[0])
    Xte, yte = Xte[:t], yte[:t]

    clf = SVC(kernel=config.kernel, C=config.c, gamma=config.gamma,
              degree=config.degree, coef0=config.coef0, random_state=0)
    clf.fit(Xtr, ytr)
    native = clf.predict(Xte)
    accuracy = float(np.mean(native == yte))

    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tag = f"{config.dataset}_{config.kernel}" \
        + (str(config.degree) if config.kernel == "poly" else "") \
        + f"_{k}"
    model_path = out / f"{tag}.model"
    csv_path = out / f"{config.dataset}_test_{t}.csv"
    meta_path = out / f"{tag}.meta.json"

    model_path.write_text(svc_to_interchange(clf))
    csv_path.write_text(samples_to_csv(Xte, yte))

    preds = verifier_predictions(model_path, csv_path)
    if len(preds) != t:
        raise RuntimeError("verifier returned a different sample count")
    agreement = float(np.mean(np.asarray(preds) == native))
    if agreement < AGREEMENT_FLOOR:
        raise RuntimeError(
            f"format contract violated: only {agreement:.4%} of predictions "
            f"agree with the trainer's native ones")

    metadata = {
        "dataset": config.dataset,
        "subset_size": k,
        "test_size": t,
        "kernel": config.kernel,
        "degree": config.degree if config.kernel == "poly" else None,
        "gamma": float(clf._gamma),
        "coef0": config.coef0 if config.kernel == "poly" else None,
        "c": config.c,
        "n_support_vectors": int(np.sum(clf.n_support_)),
        "n_classes": len(clf.classes_),
        "n_pair_problems": len(clf.classes_) * (len(clf.classes_) - 1) // 2,
        "test_accuracy": accuracy,
        "export_agreement": agreement,
        "model_file": model_path.name,
        "test_csv": csv_path.name,
    }
    meta_path.write_text(json.dumps(metadata, indent=2) + "\n")
    return TrainResult(model_path, csv_path, meta_path, metadata)
