"""SVM model representation, interchange-format parsing and concrete
one-versus-one classification.

The on-disk format is the de-facto standard text interchange format for
trained SVMs: a header of ``key value`` lines followed by an ``SV``
section holding, per support vector, the m-1 dual coefficient columns
and the sparse ``index:value`` features (1-based indices).  Support
vectors are grouped by class; for the class pair (i, j) the decision
function is

    D(x) = sum_l w_l k(sv_l, x) - rho[(i,j)]

with the weights taken from dual-coefficient column j-1 over class i's
block and column i over class j's block.  ``sign(0)`` classifies as +1,
and a voting draw resolves to the winning class with the smallest label
index (the full winning set is also exposed).

Models are immutable after parsing and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Kernel",
    "SvmModel",
    "BinaryProblem",
    "ModelParseError",
    "parse_model",
    "load_model",
    "serialize_model",
    "kernel_eval",
    "decision_value",
    "kernel_row",
    "pair_decision_values",
    "predict_ovo",
    "primal_weights",
]


class ModelParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Kernel:
    kind: str  # "linear" | "poly" | "rbf"
    degree: int = 3
    gamma: float = 1.0
    coef0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("linear", "poly", "rbf"):
            raise ValueError(f"unsupported kernel {self.kind!r}")
        if self.kind == "poly" and self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")
        if self.kind == "rbf" and not self.gamma > 0:
            raise ValueError("rbf gamma must be positive")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SvmModel:
    labels: tuple[int, ...]
    kernel: Kernel
    support_vectors: np.ndarray      # (N, n)
    dual_coeffs: np.ndarray          # (m-1, N)
    rho: np.ndarray                  # (m*(m-1)/2,)
    nr_sv: tuple[int, ...]
    _pair_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "support_vectors", _freeze(self.support_vectors))
        object.__setattr__(self, "dual_coeffs", _freeze(self.dual_coeffs))
        object.__setattr__(self, "rho", _freeze(self.rho))
        m = len(self.labels)
        if len(self.nr_sv) != m:
            raise ValueError("nr_sv length must match the class count")
        if sum(self.nr_sv) != self.support_vectors.shape[0]:
            raise ValueError("nr_sv does not sum to the support vector count")
        if self.dual_coeffs.shape != (max(m - 1, 1), self.support_vectors.shape[0]):
            raise ValueError("dual coefficient matrix has the wrong shape")
        if self.rho.shape[0] != m * (m - 1) // 2:
            raise ValueError("rho count must be m*(m-1)/2")

    @property
    def n_classes(self) -> int:
        return len(self.labels)

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    @property
    def n_sv(self) -> int:
        return self.support_vectors.shape[0]

    def class_blocks(self) -> list[np.ndarray]:
        starts = np.concatenate(([0], np.cumsum(self.nr_sv)))
        return [np.arange(starts[c], starts[c + 1]) for c in range(self.n_classes)]

    def pairs(self) -> list[tuple[int, int]]:
        m = self.n_classes
        return [(i, j) for i in range(m) for j in range(i + 1, m)]

    def binary_problem(self, i: int, j: int) -> "BinaryProblem":
        key = (i, j)
        if key not in self._pair_cache:
            blocks = self.class_blocks()
            idx = np.concatenate((blocks[i], blocks[j]))
            w = np.concatenate((self.dual_coeffs[j - 1, blocks[i]],
                                self.dual_coeffs[i, blocks[j]]))
            # a vector can support other pairs only; drop its zero terms
            nz = w != 0.0
            idx, w = idx[nz], w[nz]
            p = self.pairs().index(key)
            self._pair_cache[key] = BinaryProblem(
                pair=key,
                support_vectors=_freeze(self.support_vectors[idx]),
                weights=_freeze(w),
                bias=float(self.rho[p]),
                sv_index=_freeze(idx.astype(np.float64)).astype(np.intp),
            )
        return self._pair_cache[key]


@dataclass(frozen=True)
class BinaryProblem:
    """One ovo subproblem: weighted support vectors and a bias."""

    pair: tuple[int, int]
    support_vectors: np.ndarray
    weights: np.ndarray
    bias: float
    sv_index: np.ndarray | None = None  # rows into the parent model, if any

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]


# ---------------------------------------------------------------------------
# Parsing / serialization
# ---------------------------------------------------------------------------

_KERNEL_NAMES = {"linear": "linear", "polynomial": "poly", "rbf": "rbf"}
_REJECTED_KERNELS = {"sigmoid", "precomputed"}
_HEADER_KEYS = {"svm_type", "kernel_type", "degree", "gamma", "coef0",
                "nr_class", "total_sv", "rho", "label", "nr_sv",
                "probA", "probB"}


def parse_model(text: str | bytes, n_features: int | None = None) -> SvmModel:
    """Parse the interchange text format; ``n_features`` may widen the
    feature dimension beyond the largest sparse index seen."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header: dict[str, list[str]] = {}
    lines = text.splitlines()
    sv_start = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "SV":
            sv_start = lineno
            break
        parts = line.split()
        key = parts[0]
        if key not in _HEADER_KEYS:
            raise ModelParseError(f"unknown header entry {key!r}", lineno)
        header[key] = parts[1:]
    if sv_start is None:
        raise ModelParseError("missing SV section")

    def need(key: str) -> list[str]:
        if key not in header:
            raise ModelParseError(f"missing header entry {key!r}")
        return header[key]

    svm_type = need("svm_type")[0]
    if svm_type not in ("c_svc", "nu_svc"):
        raise ModelParseError(f"unsupported svm_type {svm_type!r} (classification only)")
    kname = need("kernel_type")[0]
    if kname in _REJECTED_KERNELS:
        raise ModelParseError(f"kernel_type {kname!r} is not supported")
    if kname not in _KERNEL_NAMES:
        raise ModelParseError(f"unknown kernel_type {kname!r}")
    kind = _KERNEL_NAMES[kname]
    try:
        gamma = float(header.get("gamma", ["1"])[0])
        degree = int(header.get("degree", ["3"])[0])
        coef0 = float(header.get("coef0", ["0"])[0])
        m = int(need("nr_class")[0])
        total_sv = int(need("total_sv")[0])
        rho = [float(v) for v in need("rho")]
        labels = [int(v) for v in need("label")]
        nr_sv = [int(v) for v in need("nr_sv")]
    except ValueError as exc:
        raise ModelParseError(f"malformed header value: {exc}") from None
    kernel = Kernel(kind, degree=degree, gamma=gamma, coef0=coef0)

    if len(labels) != m:
        raise ModelParseError(f"label count {len(labels)} != nr_class {m}")
    if len(nr_sv) != m:
        raise ModelParseError(f"nr_sv count {len(nr_sv)} != nr_class {m}")
    if len(rho) != m * (m - 1) // 2:
        raise ModelParseError(
            f"rho count {len(rho)} != m(m-1)/2 = {m * (m - 1) // 2}")
    if sum(nr_sv) != total_sv:
        raise ModelParseError(f"nr_sv sums to {sum(nr_sv)}, total_sv is {total_sv}")

    coeffs: list[list[float]] = []
    feats: list[dict[int, float]] = []
    max_index = 0
    for lineno in range(sv_start + 1, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < m - 1:
            raise ModelParseError("support vector line too short", lineno)
        try:
            row = [float(v) for v in parts[: m - 1]]
        except ValueError:
            raise ModelParseError("malformed dual coefficient", lineno) from None
        sparse: dict[int, float] = {}
        for tok in parts[m - 1:]:
            idx, _, val = tok.partition(":")
            try:
                i = int(idx)
                v = float(val)
            except ValueError:
                raise ModelParseError(f"malformed feature {tok!r}", lineno) from None
            if i < 1:
                raise ModelParseError(f"feature index {i} must be >= 1", lineno)
            sparse[i] = v
            max_index = max(max_index, i)
        coeffs.append(row)
        feats.append(sparse)
    if len(coeffs) != total_sv:
        raise ModelParseError(f"expected {total_sv} support vectors, found {len(coeffs)}")

    n = max_index if n_features is None else n_features
    if n < max_index:
        raise ModelParseError(
            f"n_features={n} smaller than largest feature index {max_index}")
    if n == 0:
        raise ModelParseError("no features found")
    sv = np.zeros((total_sv, n))
    for r, sparse in enumerate(feats):
        for i, v in sparse.items():
            sv[r, i - 1] = v
    dual = np.array(coeffs).T.reshape(max(m - 1, 1), total_sv)
    return SvmModel(labels=tuple(labels), kernel=kernel, support_vectors=sv,
                    dual_coeffs=dual, rho=np.array(rho), nr_sv=tuple(nr_sv))


def load_model(path, n_features: int | None = None) -> SvmModel:
    with open(path, "rb") as fh:
        return parse_model(fh.read(), n_features=n_features)


def serialize_model(model: SvmModel) -> str:
    k = model.kernel
    kname = {v: k2 for k2, v in _KERNEL_NAMES.items()}[k.kind]
    out = ["svm_type c_svc", f"kernel_type {kname}"]
    if k.kind == "poly":
        out.append(f"degree {k.degree}")
    if k.kind in ("poly", "rbf"):
        out.append(f"gamma {k.gamma!r}")
    if k.kind == "poly":
        out.append(f"coef0 {k.coef0!r}")
    out.append(f"nr_class {model.n_classes}")
    out.append(f"total_sv {model.n_sv}")
    out.append("rho " + " ".join(repr(float(v)) for v in model.rho))
    out.append("label " + " ".join(str(v) for v in model.labels))
    out.append("nr_sv " + " ".join(str(v) for v in model.nr_sv))
    out.append("SV")
    for r in range(model.n_sv):
        cols = [repr(float(model.dual_coeffs[c, r])) for c in range(max(model.n_classes - 1, 1))]
        featbits = [f"{j + 1}:{float(model.support_vectors[r, j])!r}"
                    for j in range(model.n_features)
                    if model.support_vectors[r, j] != 0.0]
        out.append(" ".join(cols + featbits))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Concrete evaluation
# ---------------------------------------------------------------------------

def kernel_eval(k: Kernel, x: Sequence[float], y: Sequence[float]) -> float:
    """Scalar kernel evaluation; dot products are summed left to right
    in index order so results are reproducible bit for bit."""
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch {len(x)} vs {len(y)}")
    if k.kind == "linear":
        acc = 0.0
        for a, b in zip(x, y):
            acc += a * b
        return acc
    if k.kind == "poly":
        acc = 0.0
        for a, b in zip(x, y):
            acc += a * b
        return (k.gamma * acc + k.coef0) ** k.degree
    acc = 0.0
    for a, b in zip(x, y):
        d = a - b
        acc += d * d
    return math.exp(-k.gamma * acc)


def decision_value(bp: BinaryProblem, k: Kernel, x: Sequence[float]) -> float:
    """sum_l w_l k(sv_l, x) - bias, accumulated in stored order."""
    if bp.support_vectors.shape[0] and len(x) != bp.n_features:
        raise ValueError("dimension mismatch")
    acc = 0.0
    for row, w in zip(bp.support_vectors, bp.weights):
        acc += w * kernel_eval(k, row, x)
    return acc - bp.bias


def kernel_row(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """k(sv_l, x) for every support vector (vectorised)."""
    S = model.support_vectors
    k = model.kernel
    if x.shape[0] != S.shape[1]:
        raise ValueError("dimension mismatch")
    if k.kind == "linear":
        return S @ x
    if k.kind == "poly":
        return (k.gamma * (S @ x) + k.coef0) ** k.degree
    d = S - x
    return np.exp(-k.gamma * np.einsum("ij,ij->i", d, d))


def pair_decision_values(model: SvmModel, x: np.ndarray) -> np.ndarray:
    krow = kernel_row(model, np.asarray(x, dtype=np.float64))
    out = np.empty(len(model.pairs()))
    for p, (i, j) in enumerate(model.pairs()):
        bp = model.binary_problem(i, j)
        out[p] = float(bp.weights @ krow[bp.sv_index]) - bp.bias
    return out


def predict_ovo(model: SvmModel, x: Sequence[float]) -> tuple[int, frozenset[int]]:
    """(winner, full winning set) of the ovo vote at ``x``.  The winner
    is the winning class whose label index is smallest."""
    decs = pair_decision_values(model, np.asarray(x, dtype=np.float64))
    votes = [0] * model.n_classes
    for p, (i, j) in enumerate(model.pairs()):
        votes[i if decs[p] >= 0.0 else j] += 1
    best = max(votes)
    full = frozenset(model.labels[c] for c in range(model.n_classes) if votes[c] == best)
    winner = next(model.labels[c] for c in range(model.n_classes) if votes[c] == best)
    return winner, full


def primal_weights(bp: BinaryProblem, kernel: Kernel) -> tuple[np.ndarray, float]:
    """Hyperplane form (w, b) of a linear subproblem:
    w_j = sum_l weight_l * (sv_l)_j, so that w . x - b equals the dual
    decision value up to reassociation."""
    if kernel.kind != "linear":
        raise ValueError("primal form requires a linear kernel")
    n = bp.n_features
    w = np.zeros(n)
    for j in range(n):
        acc = 0.0
        for l in range(bp.support_vectors.shape[0]):
            acc += bp.weights[l] * bp.support_vectors[l, j]
        w[j] = acc
    return w, bp.bias
