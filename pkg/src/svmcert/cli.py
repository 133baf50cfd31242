"""Batch robustness verification: dataset loading, per-sample verdicts,
aggregate report, command-line front end.

Statuses per sample:

* ``proved_robust``: the sample is classified correctly and the whole
  region provably keeps that class.
* ``proved_consistently_misclassified``: same certificate, but the
  concrete prediction is wrong (the dual notion used for provable
  vulnerability percentages).
* ``proved_vulnerable``: linear binary models only; the undecided
  region yields a concrete witness pair classified to opposite signs.
* ``unknown``: the verifier could not decide.

Report percentages use the documented denominators: robustness over
correctly classified samples, vulnerability over misclassified ones.
Output is one JSON record per sample plus a JSON summary block (see
docs/report_format.md); record layout is stable for scripting.
"""

from __future__ import annotations

import argparse
import gzip
import json
import math
import struct
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._core import BACKEND_NAME
from .interval import Interval
from .multiclass import verify_multiclass
from .perturb import FrameSpec, LinfSpec, region_to_raf
from .abstract import counterexample_linear, sign_sharp, abstract_decision_interval
from .svm_model import SvmModel, load_model, predict_ovo

__all__ = [
    "Sample",
    "SampleVerdict",
    "Report",
    "RunConfig",
    "load_dataset",
    "verify_sample",
    "run",
    "main",
]

STATUS_ROBUST = "proved_robust"
STATUS_VULNERABLE = "proved_vulnerable"
STATUS_MISCLASSIFIED = "proved_consistently_misclassified"
STATUS_UNKNOWN = "unknown"

_IDX_IMAGES_MAGIC = 0x00000803
_IDX_LABELS_MAGIC = 0x00000801


@dataclass(frozen=True)
class Sample:
    label: int
    features: np.ndarray


@dataclass
class SampleVerdict:
    index: int
    label: int
    prediction: int
    correct: bool
    status: str
    witness: tuple[list[float], list[float]] | None = None
    elapsed_ms: float = 0.0

    def record(self) -> dict:
        rec = {
            "type": "sample",
            "id": self.index,
            "label": self.label,
            "prediction": self.prediction,
            "correct": self.correct,
            "status": self.status,
            "ms": round(self.elapsed_ms, 4),
        }
        if self.witness is not None:
            rec["witness_plus"] = self.witness[0]
            rec["witness_minus"] = self.witness[1]
        return rec


@dataclass
class Report:
    total: int
    correct: int
    counts: dict
    accuracy: float
    robustness_pct: float | None
    vulnerability_pct: float | None
    mean_ms: float
    p95_ms: float
    config: dict
    verdicts: list = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "type": "summary",
            "samples": self.total,
            "correct": self.correct,
            "misclassified": self.total - self.correct,
            "counts": self.counts,
            "accuracy": round(self.accuracy, 6),
            "robustness_pct": None if self.robustness_pct is None
            else round(self.robustness_pct, 4),
            "vulnerability_pct": None if self.vulnerability_pct is None
            else round(self.vulnerability_pct, 4),
            "mean_ms": round(self.mean_ms, 4),
            "p95_ms": round(self.p95_ms, 4),
            "config": self.config,
        }


def _open_maybe_gz(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def load_dataset(path, fmt: str = "csv", labels_path=None,
                 clip: tuple[float, float] | None = (0.0, 1.0)) -> list[Sample]:
    """CSV (label, then feature decimals) or the standard IDX pair
    (images + labels); IDX pixel bytes are scaled by 1/255."""
    if fmt == "csv":
        samples = []
        with open(path, "r", encoding="utf-8") as fh:
            width = None
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if width is None:
                    width = len(parts)
                elif len(parts) != width:
                    raise ValueError(f"{path}: ragged row at line {lineno}")
                try:
                    label = int(float(parts[0]))
                    feats = np.array([float(v) for v in parts[1:]])
                except ValueError:
                    raise ValueError(
                        f"{path}: non-numeric field at line {lineno}") from None
                if clip is not None and ((feats < clip[0]).any() or (feats > clip[1]).any()):
                    raise ValueError(
                        f"{path}: line {lineno} has features outside {list(clip)}")
                samples.append(Sample(label, feats))
        return samples
    if fmt == "idx":
        if labels_path is None:
            raise ValueError("idx format needs a labels file")
        with _open_maybe_gz(path) as fh:
            magic, count, rows, cols = struct.unpack(">IIII", fh.read(16))
            if magic != _IDX_IMAGES_MAGIC:
                raise ValueError(f"{path}: bad images magic 0x{magic:08x}")
            raw = fh.read(count * rows * cols)
            if len(raw) != count * rows * cols:
                raise ValueError(f"{path}: truncated image data")
        pixels = np.frombuffer(raw, dtype=np.uint8).reshape(count, rows * cols)
        with _open_maybe_gz(labels_path) as fh:
            magic, lcount = struct.unpack(">II", fh.read(8))
            if magic != _IDX_LABELS_MAGIC:
                raise ValueError(f"{labels_path}: bad labels magic 0x{magic:08x}")
            lraw = fh.read(lcount)
        if lcount != count:
            raise ValueError("image/label counts disagree")
        labels = np.frombuffer(lraw, dtype=np.uint8)
        scale = 1.0 / 255.0
        return [Sample(int(labels[i]), pixels[i].astype(np.float64) * scale)
                for i in range(count)]
    raise ValueError(f"unknown dataset format {fmt!r}")


def verify_sample(model: SvmModel, sample: Sample, spec, domain: str = "hybrid",
                  mode: str = "exact", index: int = 0) -> SampleVerdict:
    t0 = time.perf_counter()
    prediction, _ = predict_ovo(model, sample.features)
    correct = prediction == sample.label
    box = spec.region(sample.features)
    region = None
    if domain in ("raf", "hybrid") and model.kernel.kind != "linear":
        region = region_to_raf(box)
    result = verify_multiclass(model, box, region, domain=domain, mode=mode)
    witness = None
    if result == {prediction}:
        status = STATUS_ROBUST if correct else STATUS_MISCLASSIFIED
    elif model.kernel.kind == "linear" and model.n_classes == 2:
        bp = model.binary_problem(0, 1)
        y, z = counterexample_linear(bp, box)
        witness = (list(map(float, y)), list(map(float, z)))
        status = STATUS_VULNERABLE
    else:
        status = STATUS_UNKNOWN
    elapsed = (time.perf_counter() - t0) * 1e3
    return SampleVerdict(index, sample.label, prediction, correct,
                         status, witness, elapsed)


@dataclass
class RunConfig:
    model_path: str
    dataset_path: str
    fmt: str = "csv"
    labels_path: str | None = None
    perturbation: object = None  # LinfSpec | FrameSpec
    domain: str = "hybrid"
    bilinear: str = "exact"
    clip: tuple[float, float] | None = (0.0, 1.0)
    only_correct: bool = False
    jobs: int = 1
    out: str | None = None

    def echo(self) -> dict:
        pert: dict
        if isinstance(self.perturbation, LinfSpec):
            pert = {"kind": "linf", "delta": self.perturbation.delta,
                    "clip": self.perturbation.clip}
        elif isinstance(self.perturbation, FrameSpec):
            pert = {"kind": "frame", "thickness": self.perturbation.thickness,
                    "height": self.perturbation.height,
                    "width": self.perturbation.width}
        else:
            pert = {"kind": "none"}
        return {
            "model": str(self.model_path),
            "dataset": str(self.dataset_path),
            "format": self.fmt,
            "perturbation": pert,
            "domain": self.domain,
            "bilinear": self.bilinear,
            "only_correct": self.only_correct,
            "backend": BACKEND_NAME,
        }


_WORKER: dict = {}


def _worker_init(model_path, n_features, spec, domain, mode):
    _WORKER["model"] = load_model(model_path, n_features=n_features)
    _WORKER["spec"] = spec
    _WORKER["domain"] = domain
    _WORKER["mode"] = mode


def _worker_verify(args):
    index, label, features = args
    return verify_sample(_WORKER["model"], Sample(label, np.asarray(features)),
                         _WORKER["spec"], _WORKER["domain"], _WORKER["mode"], index)


def run(config: RunConfig) -> Report:
    samples = load_dataset(config.dataset_path, config.fmt,
                           labels_path=config.labels_path, clip=config.clip)
    if not samples:
        raise ValueError(f"{config.dataset_path}: empty dataset")
    n = samples[0].features.shape[0]
    model = load_model(config.model_path)
    if model.n_features < n:
        model = load_model(config.model_path, n_features=n)
    elif model.n_features > n:
        raise ValueError(
            f"model has {model.n_features} features, dataset has {n}")
    spec = config.perturbation
    if spec is None:
        raise ValueError("no perturbation specified")

    indexed = list(enumerate(samples))
    if config.only_correct:
        indexed = [(i, s) for i, s in indexed
                   if predict_ovo(model, s.features)[0] == s.label]
        if not indexed:
            raise ValueError("no correctly classified samples to verify")

    if config.jobs > 1:
        payload = [(i, s.label, s.features) for i, s in indexed]
        with ProcessPoolExecutor(
            max_workers=config.jobs,
            initializer=_worker_init,
            initargs=(config.model_path, n, spec, config.domain, config.bilinear),
        ) as pool:
            verdicts = list(pool.map(_worker_verify, payload, chunksize=8))
    else:
        verdicts = [verify_sample(model, s, spec, config.domain,
                                  config.bilinear, index=i)
                    for i, s in indexed]
    verdicts.sort(key=lambda v: v.index)

    counts = {STATUS_ROBUST: 0, STATUS_VULNERABLE: 0,
              STATUS_MISCLASSIFIED: 0, STATUS_UNKNOWN: 0}
    for v in verdicts:
        counts[v.status] += 1
    total = len(verdicts)
    correct = sum(1 for v in verdicts if v.correct)
    mis = total - correct
    times = sorted(v.elapsed_ms for v in verdicts)
    p95 = times[min(len(times) - 1, math.ceil(0.95 * len(times)) - 1)]
    report = Report(
        total=total,
        correct=correct,
        counts=counts,
        accuracy=correct / total,
        robustness_pct=None if correct == 0
        else 100.0 * counts[STATUS_ROBUST] / correct,
        vulnerability_pct=None if mis == 0
        else 100.0 * counts[STATUS_MISCLASSIFIED] / mis,
        mean_ms=sum(times) / len(times),
        p95_ms=p95,
        config=config.echo(),
        verdicts=verdicts,
    )
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            for v in verdicts:
                fh.write(json.dumps(v.record()) + "\n")
            fh.write(json.dumps(report.summary()) + "\n")
    return report


def _parse_clip(text: str):
    if text == "off":
        return None
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("clip must be 'lo,hi' or 'off'") from None
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="svmcert",
        description="Certify robustness of an SVM classifier over a labeled test set.")
    ap.add_argument("--model", required=True, help="model file (interchange text format)")
    ap.add_argument("--dataset", required=True, help="dataset path (csv, or idx images)")
    ap.add_argument("--format", choices=["csv", "idx"], default="csv")
    ap.add_argument("--labels", help="labels file (idx format only)")
    pert = ap.add_mutually_exclusive_group(required=True)
    pert.add_argument("--linf", type=float, metavar="DELTA",
                      help="L-infinity ball radius")
    pert.add_argument("--frame", type=int, metavar="T",
                      help="border frame thickness (needs --height/--width)")
    ap.add_argument("--height", type=int)
    ap.add_argument("--width", type=int)
    ap.add_argument("--domain", choices=["interval", "raf", "hybrid"], default="hybrid")
    ap.add_argument("--bilinear", choices=["exact", "vertex"], default="exact")
    ap.add_argument("--clip", type=_parse_clip, default=(0.0, 1.0),
                    metavar="LO,HI|off")
    ap.add_argument("--only-correct", action="store_true",
                    help="verify only correctly classified samples")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", help="write per-sample records + summary (JSON lines)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.linf is not None:
            pert = LinfSpec(ns.linf, clip=ns.clip)
        else:
            if ns.height is None or ns.width is None:
                ap.error("--frame needs --height and --width")
            pert = FrameSpec(ns.frame, ns.height, ns.width)
        config = RunConfig(
            model_path=ns.model, dataset_path=ns.dataset, fmt=ns.format,
            labels_path=ns.labels, perturbation=pert, domain=ns.domain,
            bilinear=ns.bilinear, clip=ns.clip, only_correct=ns.only_correct,
            jobs=ns.jobs, out=ns.out)
        report = run(config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    s = report.summary()
    print(f"backend: {BACKEND_NAME}")
    print(f"samples: {s['samples']}  correct: {s['correct']}  "
          f"accuracy: {100 * s['accuracy']:.2f}%")
    print(f"proved robust: {report.counts[STATUS_ROBUST]}"
          + (f" ({s['robustness_pct']:.2f}% of correct)"
             if s["robustness_pct"] is not None else ""))
    print(f"proved consistently misclassified: {report.counts[STATUS_MISCLASSIFIED]}"
          + (f" ({s['vulnerability_pct']:.2f}% of misclassified)"
             if s["vulnerability_pct"] is not None else ""))
    print(f"proved vulnerable: {report.counts[STATUS_VULNERABLE]}")
    print(f"unknown: {report.counts[STATUS_UNKNOWN]}")
    print(f"time per sample: mean {s['mean_ms']:.2f} ms, p95 {s['p95_ms']:.2f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
