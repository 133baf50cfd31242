"""Model parsing, kernels, concrete ovo prediction."""

from __future__ import annotations

import math
import random
from pathlib import Path

import numpy as np
import pytest

from svmcert.svm_model import (
    BinaryProblem,
    Kernel,
    ModelParseError,
    SvmModel,
    decision_value,
    kernel_eval,
    load_model,
    parse_model,
    predict_ovo,
    primal_weights,
    serialize_model,
)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def toy():
    return load_model(DATA / "toy_poly2.model")


def random_model(rng, m=3, n=3, per_class=2, kind="rbf") -> SvmModel:
    total = m * per_class
    sv = np.array([[rng.uniform(-2, 2) for _ in range(n)] for _ in range(total)])
    dual = np.array([[rng.choice([-1, 1]) * rng.uniform(0.1, 1.5)
                      for _ in range(total)] for _ in range(m - 1)])
    rho = np.array([rng.uniform(-1, 1) for _ in range(m * (m - 1) // 2)])
    kernel = {"rbf": Kernel("rbf", gamma=0.7),
              "poly": Kernel("poly", degree=2, gamma=0.5, coef0=1.0),
              "linear": Kernel("linear")}[kind]
    return SvmModel(labels=tuple(range(m)), kernel=kernel, support_vectors=sv,
                    dual_coeffs=dual, rho=rho, nr_sv=(per_class,) * m)


class TestParse:
    def test_toy_roundtrip_prediction(self, toy):
        assert toy.kernel == Kernel("poly", degree=2, gamma=1.0, coef0=0.0)
        assert toy.labels == (1, -1)
        assert toy.n_features == 2
        winner, full = predict_ovo(toy, [5.0, 1.0])
        assert winner == 1 and full == {1}

    def test_toy_decision_value_positive_at_p(self, toy):
        bp = toy.binary_problem(0, 1)
        val = decision_value(bp, toy.kernel, [5.0, 1.0])
        assert val == pytest.approx(1.635981, abs=1e-6)

    def test_rho_count_mismatch(self):
        text = (DATA / "toy_poly2.model").read_text().replace(
            "rho -3.33", "rho -3.33 1.0 2.0")
        with pytest.raises(ModelParseError, match="rho count"):
            parse_model(text)

    def test_unknown_kernel_rejected(self):
        text = (DATA / "toy_poly2.model").read_text().replace(
            "kernel_type polynomial", "kernel_type sigmoid")
        with pytest.raises(ModelParseError, match="sigmoid"):
            parse_model(text)

    def test_regression_model_rejected(self):
        text = (DATA / "toy_poly2.model").read_text().replace(
            "svm_type c_svc", "svm_type epsilon_svr")
        with pytest.raises(ModelParseError, match="classification"):
            parse_model(text)

    def test_malformed_sv_line_reports_lineno(self):
        text = (DATA / "toy_poly2.model").read_text().replace("1:8 2:7", "1:8 2:x")
        with pytest.raises(ModelParseError, match="line 12"):
            parse_model(text)

    def test_sparse_densification(self):
        text = """svm_type c_svc
kernel_type linear
nr_class 2
total_sv 2
rho 0.0
label 0 1
nr_sv 1 1
SV
1.0 1:0.5 784:1.0
-1.0 2:0.25
"""
        model = parse_model(text)
        assert model.n_features == 784
        assert model.support_vectors[0, 0] == 0.5
        assert model.support_vectors[0, 783] == 1.0
        assert model.support_vectors[1, 1] == 0.25
        assert np.count_nonzero(model.support_vectors) == 3

    def test_n_features_override(self):
        text = (DATA / "toy_poly2.model").read_text()
        model = parse_model(text, n_features=5)
        assert model.n_features == 5
        with pytest.raises(ModelParseError, match="smaller than"):
            parse_model(text, n_features=1)

    def test_serialize_parse_same_predictions(self, toy):
        again = parse_model(serialize_model(toy))
        rng = random.Random(3)
        for _ in range(1_000):
            x = [rng.uniform(-10, 10), rng.uniform(-10, 10)]
            assert predict_ovo(toy, x) == predict_ovo(again, x)


class TestKernelEval:
    def test_poly_golden(self):
        k = Kernel("poly", degree=2, gamma=1.0, coef0=0.0)
        assert kernel_eval(k, (8.0, 7.0), (5.0, 1.0)) == 47.0**2 == 2209.0

    def test_rbf_self(self):
        k = Kernel("rbf", gamma=0.3)
        assert kernel_eval(k, (0.4, -1.2), (0.4, -1.2)) == 1.0

    def test_linear_unit_vectors(self):
        k = Kernel("linear")
        e = np.eye(3)
        for i in range(3):
            for j in range(3):
                assert kernel_eval(k, e[i], e[j]) == (1.0 if i == j else 0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            kernel_eval(Kernel("linear"), (1.0,), (1.0, 2.0))


class TestDecision:
    def test_empty_support_set(self):
        bp = BinaryProblem(pair=(0, 1), support_vectors=np.zeros((0, 2)),
                           weights=np.zeros(0), bias=0.75)
        assert decision_value(bp, Kernel("linear"), [1.0, 2.0]) == -0.75

    def test_cancelling_weights(self):
        bp = BinaryProblem(pair=(0, 1),
                           support_vectors=np.array([[1.0, 0.0], [1.0, 0.0]]),
                           weights=np.array([1.0, -1.0]), bias=0.5)
        assert decision_value(bp, Kernel("linear"), [3.0, 4.0]) == -0.5


class TestPredictOvo:
    def test_binary_reduces_to_sign(self, toy):
        rng = random.Random(4)
        bp = toy.binary_problem(0, 1)
        for _ in range(300):
            x = [rng.uniform(-8, 8), rng.uniform(-8, 8)]
            winner, full = predict_ovo(toy, x)
            val = decision_value(bp, toy.kernel, x)
            assert winner == (1 if val >= 0 else -1)
            assert winner in full and len(full) >= 1

    def test_cyclic_tie_yields_full_set(self):
        # All dual weights cancel pairwise, so each pair's decision is
        # -rho: choose rho to make the votes cycle 0 -> 1 -> 2 -> 0.
        sv = np.array([[float(c), float(c)] for c in range(3) for _ in range(2)])
        dual = np.array([[0.5, -0.5, 0.5, -0.5, 0.5, -0.5],
                         [0.5, -0.5, 0.5, -0.5, 0.5, -0.5]])
        model = SvmModel(labels=(10, 20, 30), kernel=Kernel("linear"),
                         support_vectors=sv, dual_coeffs=dual,
                         rho=np.array([-1.0, 1.0, -1.0]), nr_sv=(2, 2, 2))
        winner, full = predict_ovo(model, [0.0, 0.0])
        assert full == {10, 20, 30}
        assert winner == 10

    def test_multiclass_votes_consistent(self):
        rng = random.Random(5)
        model = random_model(rng, m=4, n=3)
        for _ in range(200):
            x = np.array([rng.uniform(-2, 2) for _ in range(3)])
            winner, full = predict_ovo(model, x)
            assert winner in full
            assert full <= set(model.labels)


class TestPrimal:
    def test_single_sv(self):
        bp = BinaryProblem(pair=(0, 1), support_vectors=np.array([[1.0, 2.0]]),
                           weights=np.array([3.0]), bias=0.0)
        w, b = primal_weights(bp, Kernel("linear"))
        assert list(w) == [3.0, 6.0] and b == 0.0

    def test_cancelling(self):
        bp = BinaryProblem(pair=(0, 1),
                           support_vectors=np.array([[1.0, 0.0], [1.0, 0.0]]),
                           weights=np.array([1.0, -1.0]), bias=0.25)
        w, _ = primal_weights(bp, Kernel("linear"))
        assert list(w) == [0.0, 0.0]

    def test_agrees_with_dual(self):
        rng = random.Random(6)
        model = random_model(rng, m=2, n=4, per_class=3, kind="linear")
        bp = model.binary_problem(0, 1)
        w, b = primal_weights(bp, model.kernel)
        for _ in range(1_000):
            x = np.array([rng.uniform(-3, 3) for _ in range(4)])
            dual = decision_value(bp, model.kernel, x)
            assert abs((w @ x - b) - dual) <= 1e-9 * max(1.0, abs(dual))

    def test_rejects_nonlinear(self):
        bp = BinaryProblem(pair=(0, 1), support_vectors=np.zeros((1, 2)),
                           weights=np.array([1.0]), bias=0.0)
        with pytest.raises(ValueError):
            primal_weights(bp, Kernel("rbf", gamma=1.0))


def test_sign_zero_classifies_positive():
    sv = np.array([[1.0]])
    model = SvmModel(labels=(7, 9), kernel=Kernel("linear"),
                     support_vectors=sv, dual_coeffs=np.array([[1.0]]),
                     rho=np.array([0.0]), nr_sv=(1, 0))
    winner, _ = predict_ovo(model, [0.0])  # decision value exactly 0
    assert winner == 7
