"""Abstract evaluation of binary SVM classifiers.

A binary subproblem is evaluated over a perturbation region in two
numeric domains: boxes (intervals) and RAF vectors.  Both evaluations
return the decision value *minus the bias*, so the abstract sign test
is always against zero.  For linear kernels the primal form is
mandatory: every input component occurs exactly once there, which makes
the interval evaluation exact on the reals and the verifier complete;
consequently the hybrid classifier uses the interval path alone for
linear kernels, and the two-sided counterexample construction below
turns every linear "don't know" into a concrete robustness witness
pair.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import raf as rf
from . import rounding as rd
from ._core import get_backend
from .interval import BOTTOM, Box, Interval, iv_add, iv_meet, iv_monotone, iv_pow, iv_scale
from .raf import RAF, RafVec, to_interval
from .svm_model import BinaryProblem, Kernel, primal_weights

__all__ = [
    "AbstractVerdict",
    "HybridValue",
    "sign_sharp",
    "abstract_decision_interval",
    "abstract_decision_raf",
    "classify_hybrid",
    "counterexample_linear",
]


class AbstractVerdict(enum.Enum):
    PLUS = 1
    MINUS = -1
    TOP = 0  # "don't know"

    def decided(self) -> bool:
        return self is not AbstractVerdict.TOP


@dataclass(frozen=True)
class HybridValue:
    """Both decision enclosures for one subproblem (bias folded in)."""

    iv: Interval
    raf_iv: Interval

    def meet(self) -> Interval:
        return iv_meet(self.iv, self.raf_iv)


def sign_sharp(iv: Interval, b: float = 0.0) -> AbstractVerdict:
    """Sound abstract sign test against threshold ``b``
    (sign_b(x) = +1 iff x >= b, and sign_b(0) is +1)."""
    if iv.is_bottom:
        raise ValueError("sign of the empty interval")
    if iv.lo >= b:
        return AbstractVerdict.PLUS
    if iv.hi < b:
        return AbstractVerdict.MINUS
    return AbstractVerdict.TOP


def _box_arrays(box: Box) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([iv.lo for iv in box])
    hi = np.array([iv.hi for iv in box])
    if np.isinf(lo).any() or np.isinf(hi).any():
        raise ValueError("abstract classifiers require bounded boxes")
    return lo, hi


def _region_arrays(region: RafVec) -> tuple[np.ndarray, np.ndarray, np.ndarray] | None:
    """(centers, radii, noises) when the region is axis-aligned
    (component j depends only on eps_j), else None."""
    n = len(region)
    c = np.empty(n)
    r = np.empty(n)
    ar = np.empty(n)
    for j, a in enumerate(region):
        if len(a) != n:
            raise ValueError("region components disagree on length")
        for k, coeff in enumerate(a.coeffs):
            if k != j and coeff != 0.0:
                return None
        c[j] = a.center
        r[j] = a.coeffs[j]
        ar[j] = a.noise
    if (r < 0).any():
        return None
    return c, r, ar


def _kernel_params(k: Kernel):
    if k.kind == "poly":
        return "poly", (k.gamma, k.coef0, k.degree)
    if k.kind == "rbf":
        return "rbf", (k.gamma,)
    return "linear", ()


def abstract_decision_interval(bp: BinaryProblem, k: Kernel, box: Box) -> Interval:
    """Sound enclosure of {D(x) - b | x in the box}."""
    if len(box) != bp.n_features and bp.support_vectors.size:
        raise ValueError("box dimension does not match the problem")
    lo, hi = _box_arrays(box)
    backend = get_backend()
    kind, params = _kernel_params(k)
    if kind == "linear":
        w, b = primal_weights(bp, k)
        return Interval(*backend.linear_interval(w, b, lo, hi))
    klo, khi = backend.kernel_bounds(kind, params, bp.support_vectors, lo, hi)
    return Interval(*backend.pair_interval(klo, khi, bp.weights, bp.bias))


def abstract_decision_raf(bp: BinaryProblem, k: Kernel, region: RafVec,
                          mode: str = "exact") -> RAF:
    """Sound RAF enclosure of {D(x) - b | x in the region}."""
    if len(region) != bp.n_features and bp.support_vectors.size:
        raise ValueError("region dimension does not match the problem")
    arrays = _region_arrays(region)
    if arrays is None:
        return _decision_raf_general(bp, k, region, mode)
    c, r, ar = arrays
    backend = get_backend()
    kind, params = _kernel_params(k)
    if kind == "linear":
        w, b = primal_weights(bp, k)
        center, coeffs, noise = backend.linear_raf(w, b, c, r, ar)
    else:
        state = backend.kernel_rafs(kind, params, bp.support_vectors, c, r, ar, mode)
        center, coeffs, noise = backend.pair_raf(
            kind, state, bp.weights, bp.bias, bp.support_vectors, c, r)
    return RAF(float(center), tuple(float(v) for v in coeffs), float(noise))


def _decision_raf_general(bp, k, region, mode):
    # Composition over the scalar RAF algebra; used for regions that are
    # not axis-aligned.  Slow but fully general.
    n = len(region)
    acc = rf.raf_const(-bp.bias, n)
    for row, w in zip(bp.support_vectors, bp.weights):
        if k.kind == "poly":
            dot = rf.raf_const(k.coef0, n)
            for xj, sj in zip(region, row):
                if sj != 0.0:
                    dot = rf.raf_add(dot, rf.raf_scale(k.gamma * sj, xj))
            term = rf.raf_pow(dot, k.degree, mode)
        elif k.kind == "rbf":
            sq = rf.raf_const(0.0, n)
            for xj, sj in zip(region, row):
                dj = rf.raf_add(xj, rf.raf_const(-sj, n))
                sq = rf.raf_add(sq, rf.raf_mul(dj, dj, mode))
            term = rf.raf_exp(rf.raf_scale(-k.gamma, sq))
        else:
            term = rf.raf_const(0.0, n)
            for xj, sj in zip(region, row):
                if sj != 0.0:
                    term = rf.raf_add(term, rf.raf_scale(sj, xj))
        acc = rf.raf_add(acc, rf.raf_scale(float(w), term))
    return acc


def classify_hybrid(bp: BinaryProblem, k: Kernel, box: Box, region: RafVec | None,
                    mode: str = "exact") -> AbstractVerdict:
    """Meet of the interval and RAF enclosures, then the sign test.
    Linear kernels use the (complete) interval path alone."""
    iv = abstract_decision_interval(bp, k, box)
    if k.kind == "linear" or region is None:
        return sign_sharp(iv)
    raf_iv = to_interval(abstract_decision_raf(bp, k, region, mode))
    combined = HybridValue(iv, raf_iv).meet()
    if combined.is_bottom:
        # Both enclosures are sound, so they can only be disjoint if
        # something upstream was not; fail loudly.
        raise AssertionError("sound enclosures cannot be disjoint")
    return sign_sharp(combined)


def counterexample_linear(bp: BinaryProblem, box: Box) -> tuple[np.ndarray, np.ndarray]:
    """The strongest adversarial pair (y, z) in the box for a linear
    subproblem whose interval verdict is TOP: w.y - b hits the upper
    end of the decision range (class +1), w.z - b the lower (class -1)."""
    kernel = Kernel("linear")
    verdict = sign_sharp(abstract_decision_interval(bp, kernel, box))
    if verdict.decided():
        raise ValueError("counterexample requested but the verdict is decided")
    w, _ = primal_weights(bp, kernel)
    lo = np.array([iv.lo for iv in box])
    hi = np.array([iv.hi for iv in box])
    y = np.where(w >= 0.0, hi, lo)
    z = np.where(w >= 0.0, lo, hi)
    return y, z
