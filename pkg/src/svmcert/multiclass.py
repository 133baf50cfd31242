"""Abstract one-versus-one multi-classification.

Pair verdicts may be "don't know", so vote counts become integer
intervals: a decided pair gives its winner a [1,1] vote, an undecided
pair gives both classes [0,1].  A class stays feasible when no other
class is certainly ahead of it; the result set always contains every
class any concretization could elect, and is never empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .abstract import AbstractVerdict, HybridValue, abstract_decision_interval, sign_sharp
from .interval import Box, Interval, iv_meet
from .raf import RafVec
from .svm_model import SvmModel
from ._core import get_backend

__all__ = [
    "VoteRange",
    "abstract_votes",
    "m_ovo_sharp",
    "pair_verdicts",
    "verify_multiclass",
]


@dataclass(frozen=True)
class VoteRange:
    vmin: int
    vmax: int

    def __post_init__(self):
        if not 0 <= self.vmin <= self.vmax:
            raise ValueError(f"invalid vote range [{self.vmin}, {self.vmax}]")


def abstract_votes(verdicts: Mapping[tuple[int, int], AbstractVerdict],
                   m: int) -> list[VoteRange]:
    """Interval vote counts per class from pairwise verdicts; verdict
    PLUS of pair (i, j), i < j, votes for class i, MINUS for class j."""
    expected = {(i, j) for i in range(m) for j in range(i + 1, m)}
    if set(verdicts) != expected:
        missing = expected - set(verdicts)
        raise ValueError(f"missing pair verdicts: {sorted(missing)[:4]}")
    vmin = [0] * m
    vmax = [0] * m
    for (i, j), v in verdicts.items():
        if v is AbstractVerdict.PLUS:
            vmin[i] += 1
            vmax[i] += 1
        elif v is AbstractVerdict.MINUS:
            vmin[j] += 1
            vmax[j] += 1
        else:
            vmax[i] += 1
            vmax[j] += 1
    return [VoteRange(a, b) for a, b in zip(vmin, vmax)]


def m_ovo_sharp(votes: Sequence[VoteRange]) -> frozenset[int]:
    """Feasible winner set: class i stays in unless some j is certainly
    ahead (v_j^min > v_i^max).  Returns class indices."""
    out = set()
    for i, vi in enumerate(votes):
        if all(vj.vmin <= vi.vmax for j, vj in enumerate(votes) if j != i):
            out.add(i)
    if not out:  # cannot happen: the argmax of vmin is always feasible
        raise AssertionError("empty abstract winner set")
    return frozenset(out)


def pair_verdicts(model: SvmModel, box: Box, region: RafVec | None,
                  domain: str = "hybrid", mode: str = "exact",
                  ) -> dict[tuple[int, int], AbstractVerdict]:
    """Abstract verdict of every ovo subproblem over the region.

    The per-support-vector kernel enclosures are computed once for the
    whole model and combined per pair.  ``domain`` selects which
    enclosure(s) feed the sign test: interval, raf, or their meet
    (hybrid).  Linear kernels always use the interval path.
    """
    if domain not in ("interval", "raf", "hybrid"):
        raise ValueError(f"unknown domain {domain!r}")
    backend = get_backend()
    k = model.kernel
    m = model.n_classes
    S = model.support_vectors
    N = model.n_sv

    use_iv = domain in ("interval", "hybrid") or k.kind == "linear"
    use_raf = domain in ("raf", "hybrid") and k.kind != "linear"

    lo = hi = None
    klo = khi = None
    state = None
    c = r = ar = None
    if use_iv:
        lo = np.array([ivl.lo for ivl in box])
        hi = np.array([ivl.hi for ivl in box])
    if use_raf:
        if region is None:
            raise ValueError("RAF domain requested but no region given")
        c = np.array([a.center for a in region])
        r = np.array([a.coeffs[j] for j, a in enumerate(region)])
        ar = np.array([a.noise for a in region])

    if k.kind != "linear":
        kind = k.kind
        params = (k.gamma, k.coef0, k.degree) if kind == "poly" else (k.gamma,)
        if use_iv:
            klo, khi = backend.kernel_bounds(kind, params, S, lo, hi)
        if use_raf:
            state = backend.kernel_rafs(kind, params, S, c, r, ar, mode)

    out: dict[tuple[int, int], AbstractVerdict] = {}
    for i, j in model.pairs():
        bp = model.binary_problem(i, j)
        if k.kind == "linear":
            iv = abstract_decision_interval(bp, k, box)
            out[(i, j)] = sign_sharp(iv)
            continue
        w_full = np.zeros(N)
        w_full[bp.sv_index] = bp.weights
        enclosures = []
        if use_iv:
            enclosures.append(Interval(*backend.pair_interval(klo, khi, w_full, bp.bias)))
        if use_raf:
            center, coeffs, noise = backend.pair_raf(
                k.kind, state, w_full, bp.bias, S, c, r)
            enclosures.append(Interval(*backend.raf_enclosure(center, coeffs, noise)))
        combined = enclosures[0]
        for e in enclosures[1:]:
            combined = iv_meet(combined, e)
        if combined.is_bottom:
            raise AssertionError("sound enclosures cannot be disjoint")
        out[(i, j)] = sign_sharp(combined)
    return out


def verify_multiclass(model: SvmModel, box: Box, region: RafVec | None = None,
                      domain: str = "hybrid", mode: str = "exact") -> frozenset[int]:
    """Abstract winner LABEL set of the ovo vote over the region."""
    verdicts = pair_verdicts(model, box, region, domain, mode)
    votes = abstract_votes(verdicts, model.n_classes)
    classes = m_ovo_sharp(votes)
    return frozenset(model.labels[i] for i in classes)
