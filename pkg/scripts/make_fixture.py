"""Regenerate the committed fixture model and test slice.

Trains an RBF ovo classifier on the first 1000 samples of the bundled
scikit-learn digits set (8x8 grayscale, features scaled to [0,1]) and
exports it in the interchange format together with a 100-sample CSV
test slice.  Deterministic, offline.

Usage: python scripts/make_fixture.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits
from sklearn.svm import SVC

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from svmcert.svm_model import Kernel, SvmModel, parse_model, serialize_model, predict_ovo


def export_svc(clf, kernel: Kernel) -> str:
    model = SvmModel(
        labels=tuple(int(c) for c in clf.classes_),
        kernel=kernel,
        support_vectors=clf.support_vectors_,
        dual_coeffs=clf.dual_coef_,
        rho=-clf.intercept_,
        nr_sv=tuple(int(v) for v in clf.n_support_),
    )
    return serialize_model(model)


def main(outdir="fixtures"):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    digits = load_digits()
    X = digits.data / 16.0
    y = digits.target.astype(int)
    Xtr, ytr = X[:1000], y[:1000]
    Xte, yte = X[1000:1100], y[1000:1100]

    clf = SVC(kernel="rbf", C=10.0, gamma="scale", random_state=0)
    clf.fit(Xtr, ytr)
    text = export_svc(clf, Kernel("rbf", gamma=float(clf._gamma)))
    model = parse_model(text, n_features=X.shape[1])

    agree = sum(int(predict_ovo(model, x)[0] == p)
                for x, p in zip(Xte, clf.predict(Xte)))
    acc = float(np.mean(clf.predict(Xte) == yte))
    print(f"export/native agreement: {agree}/100, test accuracy: {acc:.3f}")
    assert agree >= 99

    (out / "digits_rbf_1k.model").write_text(text)
    with open(out / "digits_test_100.csv", "w") as fh:
        for label, feats in zip(yte, Xte):
            fh.write(",".join([str(int(label))] + [repr(float(v)) for v in feats]) + "\n")
    print(f"wrote {out}/digits_rbf_1k.model and {out}/digits_test_100.csv")


if __name__ == "__main__":
    main(*sys.argv[1:])
