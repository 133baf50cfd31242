"""Pure (numpy) vs compiled (directed-rounding) backend agreement.

Both backends must satisfy the same soundness contract; their
enclosures may differ only by rounding-slack-sized amounts.  Skipped
when the extension is not built.
"""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np
import pytest

import svmcert._core as core
from svmcert._core import pure
from svmcert.abstract import abstract_decision_interval, abstract_decision_raf, sign_sharp
from svmcert.multiclass import verify_multiclass
from svmcert.perturb import linf_region, region_to_raf
from svmcert.raf import to_interval
from svmcert.svm_model import decision_value, load_model, predict_ovo

from .test_model import random_model

DATA = Path(__file__).parent / "data"

compiled = pytest.importorskip("svmcert._core._speed")


@pytest.fixture(params=["pure", "compiled"])
def backend(request, monkeypatch):
    impl = pure if request.param == "pure" else compiled
    monkeypatch.setattr(core, "impl", impl)
    return request.param


def test_backend_selection_reports():
    assert core.get_backend("pure") is pure
    assert core.get_backend("compiled") is compiled
    assert compiled.BACKEND_NAME == "compiled"


def test_golden_model_on_both_backends(backend):
    toy = load_model(DATA / "toy_poly2.model")
    bp = toy.binary_problem(0, 1)
    box = linf_region([5.0, 1.0], 1.0, clip=None)
    iv = abstract_decision_interval(bp, toy.kernel, box)
    assert iv.lo == pytest.approx(-9.231596, abs=0.05)
    assert iv.hi == pytest.approx(12.735958, abs=0.05)
    region = region_to_raf(box)
    res = to_interval(abstract_decision_raf(bp, toy.kernel, region, mode="vertex"))
    assert res.lo == pytest.approx(0.200413, abs=0.05)
    assert res.hi == pytest.approx(3.070115, abs=0.05)
    res = to_interval(abstract_decision_raf(bp, toy.kernel, region, mode="exact"))
    assert res.lo > 0.0


@pytest.mark.parametrize("kind", ["linear", "poly", "rbf"])
def test_interval_paths_agree(kind):
    rng = random.Random(60)
    for _ in range(50):
        model = random_model(rng, m=2, n=4, per_class=3, kind=kind)
        x = [rng.uniform(0.0, 1.0) for _ in range(4)]
        box = linf_region(x, rng.uniform(0.005, 0.3))
        bp = model.binary_problem(0, 1)
        lo = np.array([iv.lo for iv in box])
        hi = np.array([iv.hi for iv in box])
        if kind == "linear":
            from svmcert.svm_model import primal_weights
            w, b = primal_weights(bp, model.kernel)
            got_p = pure.linear_interval(w, b, lo, hi)
            got_c = compiled.linear_interval(w, b, lo, hi)
        else:
            params = ((model.kernel.gamma, model.kernel.coef0, model.kernel.degree)
                      if kind == "poly" else (model.kernel.gamma,))
            kp = pure.kernel_bounds(kind, params, bp.support_vectors, lo, hi)
            kc = compiled.kernel_bounds(kind, params, bp.support_vectors, lo, hi)
            got_p = pure.pair_interval(kp[0], kp[1], bp.weights, bp.bias)
            got_c = compiled.pair_interval(kc[0], kc[1], bp.weights, bp.bias)
        scale = max(1.0, abs(got_p[0]), abs(got_p[1]))
        assert got_p[0] == pytest.approx(got_c[0], abs=1e-9 * scale)
        assert got_p[1] == pytest.approx(got_c[1], abs=1e-9 * scale)
        for _ in range(40):
            pt = [rng.uniform(a, b) for a, b in zip(lo, hi)]
            val = decision_value(bp, model.kernel, pt)
            assert got_c[0] <= val <= got_c[1]
            assert got_p[0] <= val <= got_p[1]


@pytest.mark.parametrize("kind", ["poly", "rbf"])
@pytest.mark.parametrize("mode", ["exact", "vertex"])
def test_raf_paths_agree_and_sound(kind, mode):
    rng = random.Random(61)
    for _ in range(30):
        model = random_model(rng, m=2, n=3, per_class=3, kind=kind)
        x = [rng.uniform(0.0, 1.0) for _ in range(3)]
        box = linf_region(x, rng.uniform(0.01, 0.25))
        region = region_to_raf(box)
        bp = model.binary_problem(0, 1)
        c = np.array([a.center for a in region])
        r = np.array([a.coeffs[j] for j, a in enumerate(region)])
        ar = np.array([a.noise for a in region])
        params = ((model.kernel.gamma, model.kernel.coef0, model.kernel.degree)
                  if kind == "poly" else (model.kernel.gamma,))
        outs = {}
        for name, impl in (("pure", pure), ("compiled", compiled)):
            state = impl.kernel_rafs(kind, params, bp.support_vectors, c, r, ar, mode)
            outs[name] = impl.pair_raf(kind, state, bp.weights, bp.bias,
                                       bp.support_vectors, c, r)
        (c1, v1, n1), (c2, v2, n2) = outs["pure"], outs["compiled"]
        scale = max(1.0, abs(c1))
        assert c1 == pytest.approx(c2, abs=1e-7 * scale)
        assert np.allclose(v1, v2, atol=1e-7 * scale)
        assert n1 == pytest.approx(n2, abs=1e-5 * scale)
        if mode == "exact":  # vertex mode is a documented approximation
            for center, coeffs, noise in outs.values():
                for _ in range(40):
                    eps = np.array([rng.uniform(-1, 1) for _ in range(3)])
                    pt = c + r * eps
                    val = decision_value(bp, model.kernel, pt)
                    lin = center + float(np.dot(coeffs, eps))
                    assert lin - noise <= val <= lin + noise


def test_multiclass_verdicts_agree(backend):
    rng = random.Random(62)
    mismatches = 0
    for _ in range(40):
        kind = rng.choice(["linear", "poly", "rbf"])
        model = random_model(rng, m=3, n=3, per_class=2, kind=kind)
        x = [rng.uniform(0.0, 1.0) for _ in range(3)]
        box = linf_region(x, rng.uniform(0.01, 0.1))
        region = region_to_raf(box)
        result = verify_multiclass(model, box, region)
        for _ in range(20):
            pt = [rng.uniform(iv.lo, iv.hi) for iv in box]
            _, full = predict_ovo(model, pt)
            assert full <= result
    assert mismatches == 0


def test_compiled_backend_is_active_by_default():
    import os

    if os.environ.get("SVMCERT_BACKEND", "auto") != "auto":
        pytest.skip("backend forced by environment")
    assert core.BACKEND_NAME == "compiled"
