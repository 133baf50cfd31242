"""Compare the pure (numpy) and compiled (Cython) kernel backends.

Times the full per-sample abstract verification (all ovo pairs, hybrid
domain) on synthetic models of increasing size, plus the committed
fixture model when present.

Usage: python benchmarks/bench_backends.py [--repeats 5]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import svmcert._core as core
from svmcert._core import pure
from svmcert.multiclass import verify_multiclass
from svmcert.perturb import linf_region, region_to_raf
from svmcert.svm_model import Kernel, SvmModel


def synthetic_model(rng, m, n, per_class, kind):
    total = m * per_class
    sv = rng.random((total, n))
    dual = rng.uniform(-1.5, 1.5, size=(m - 1, total))
    dual[dual == 0.0] = 0.5
    rho = rng.uniform(-1, 1, size=m * (m - 1) // 2)
    kernel = {"rbf": Kernel("rbf", gamma=0.02),
              "poly": Kernel("poly", degree=3, gamma=0.05, coef0=1.0)}[kind]
    return SvmModel(labels=tuple(range(m)), kernel=kernel, support_vectors=sv,
                    dual_coeffs=dual, rho=rho, nr_sv=(per_class,) * m)


def time_one(model, x, delta, repeats):
    box = linf_region(x, delta)
    region = region_to_raf(box)
    times = []
    verify_multiclass(model, box, region)  # warm-up
    for _ in range(repeats):
        t0 = time.perf_counter()
        verify_multiclass(model, box, region)
        times.append((time.perf_counter() - t0) * 1e3)
    return statistics.median(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    try:
        from svmcert._core import _speed as compiled
    except ImportError:
        compiled = None
        print("compiled backend not built (python setup.py build_ext --inplace)")

    rng = np.random.default_rng(0)
    cases = [
        ("rbf", 10, 64, 30),
        ("rbf", 10, 784, 60),
        ("poly", 10, 64, 30),
        ("poly", 10, 784, 60),
    ]
    print(f"{'model':>22} {'pure ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for kind, m, n, per_class in cases:
        model = synthetic_model(rng, m, n, per_class, kind)
        x = rng.random(n) * 0.8 + 0.1
        core.impl = pure
        t_pure = time_one(model, x, 0.01, args.repeats)
        if compiled is not None:
            core.impl = compiled
            t_comp = time_one(model, x, 0.01, args.repeats)
            core.impl = pure
            ratio = t_pure / t_comp if t_comp else float("nan")
            print(f"{kind}-{m}c-{n}f-{m*per_class}sv".rjust(22)
                  + f" {t_pure:10.2f} {t_comp:12.2f} {ratio:8.2f}x")
        else:
            print(f"{kind}-{m}c-{n}f-{m*per_class}sv".rjust(22) + f" {t_pure:10.2f}")

    fixture = Path(__file__).resolve().parents[1] / "fixtures" / "digits_rbf_1k.model"
    if fixture.exists() and compiled is not None:
        from svmcert.svm_model import load_model
        model = load_model(fixture)
        x = np.clip(rng.random(model.n_features), 0.05, 0.95)
        core.impl = pure
        t_pure = time_one(model, x, 0.01, args.repeats)
        core.impl = compiled
        t_comp = time_one(model, x, 0.01, args.repeats)
        core.impl = pure
        print(f"{'fixture-rbf-digits':>22} {t_pure:10.2f} {t_comp:12.2f} "
              f"{t_pure / t_comp:8.2f}x")


if __name__ == "__main__":
    main()
