"""Command-line front end for the training harness."""

from __future__ import annotations

import argparse
import sys

from .datasets import DatasetMissing
from .train import TrainConfig, train_and_export


def build_parser():
    ap = argparse.ArgumentParser(
        prog="svmtrain",
        description="Train an ovo SVM multi-classifier and export the model "
                    "plus a CSV test slice for the verifier.")
    ap.add_argument("--dataset", default="mnist",
                    choices=["mnist", "fmnist", "digits", "digits-border"])
    ap.add_argument("--subset", type=int, default=1000,
                    help="training subset size (typical ladder: 1k..60k)")
    ap.add_argument("--kernel", default="rbf", choices=["linear", "poly", "rbf"])
    ap.add_argument("--degree", type=int, default=3)
    ap.add_argument("--gamma", default="scale")
    ap.add_argument("--coef0", type=float, default=0.0)
    ap.add_argument("--c", type=float, default=10.0)
    ap.add_argument("--test-size", type=int, default=1000)
    ap.add_argument("--data-dir", default=None,
                    help="directory with the IDX files (or SVMTRAIN_DATA)")
    ap.add_argument("--out-dir", default="models")
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    gamma = ns.gamma if ns.gamma == "scale" else float(ns.gamma)
    config = TrainConfig(dataset=ns.dataset, subset_size=ns.subset,
                         kernel=ns.kernel, degree=ns.degree, gamma=gamma,
                         coef0=ns.coef0, c=ns.c, test_size=ns.test_size,
                         data_dir=ns.data_dir, out_dir=ns.out_dir)
    try:
        result = train_and_export(config)
    except (DatasetMissing, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    m = result.metadata
    print(f"model: {result.model_path}")
    print(f"test slice: {result.test_csv_path}")
    print(f"classes: {m['n_classes']} ({m['n_pair_problems']} pair problems), "
          f"support vectors: {m['n_support_vectors']}")
    print(f"test accuracy: {m['test_accuracy']:.4f}, "
          f"export agreement: {m['export_agreement']:.4%}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
