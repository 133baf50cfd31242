"""Interchange-format export of fitted scikit-learn SVCs.

The writer is intentionally independent of the verifier package: the
trainer produces the text format, the verifier parses it, and the
format contract is validated end to end by comparing predictions
(see train.train_and_export)."""

from __future__ import annotations

import numpy as np

__all__ = ["svc_to_interchange", "samples_to_csv"]

_KERNEL_NAMES = {"linear": "linear", "poly": "polynomial", "rbf": "rbf"}


def svc_to_interchange(clf) -> str:
    """Serialize a fitted sklearn.svm.SVC (ovo) to the interchange text
    format: header, then one line per support vector with the m-1 dual
    coefficient columns and 1-based sparse features."""
    kernel = clf.kernel
    if kernel not in _KERNEL_NAMES:
        raise ValueError(f"kernel {kernel!r} has no interchange representation")
    classes = [int(v) for v in clf.classes_]
    m = len(classes)
    sv = np.asarray(clf.support_vectors_, dtype=np.float64)
    dual = np.asarray(clf.dual_coef_, dtype=np.float64)
    rho = -np.asarray(clf.intercept_, dtype=np.float64)
    if m == 2:
        # sklearn inverts the sign of binary dual coefficients and
        # intercept relative to the interchange convention (positive
        # decision votes for the first label)
        dual = -dual
        rho = -rho
    n_support = [int(v) for v in clf.n_support_]
    gamma = float(clf._gamma)

    lines = ["svm_type c_svc", f"kernel_type {_KERNEL_NAMES[kernel]}"]
    if kernel == "poly":
        lines.append(f"degree {int(clf.degree)}")
    if kernel in ("poly", "rbf"):
        lines.append(f"gamma {gamma!r}")
    if kernel == "poly":
        lines.append(f"coef0 {float(clf.coef0)!r}")
    lines.append(f"nr_class {m}")
    lines.append(f"total_sv {sv.shape[0]}")
    lines.append("rho " + " ".join(repr(float(v)) for v in rho))
    lines.append("label " + " ".join(str(v) for v in classes))
    lines.append("nr_sv " + " ".join(str(v) for v in n_support))
    lines.append("SV")
    for i in range(sv.shape[0]):
        cols = [repr(float(dual[c, i])) for c in range(max(m - 1, 1))]
        feats = [f"{j + 1}:{float(sv[i, j])!r}"
                 for j in range(sv.shape[1]) if sv[i, j] != 0.0]
        lines.append(" ".join(cols + feats))
    return "\n".join(lines) + "\n"


def samples_to_csv(X, y) -> str:
    rows = []
    for label, feats in zip(y, X):
        rows.append(",".join([str(int(label))] + [repr(float(v)) for v in feats]))
    return "\n".join(rows) + "\n"
