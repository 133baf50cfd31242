"""Adversarial region construction."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from svmcert.interval import Interval
from svmcert.perturb import (
    FrameSpec,
    LinfSpec,
    frame_region,
    linf_region,
    region_to_raf,
)
from svmcert.raf import to_interval


def test_linf_unclipped_golden():
    box = linf_region([5.0, 1.0], 1.0, clip=None)
    assert box == (Interval(4.0, 6.0), Interval(0.0, 2.0))


def test_linf_clipped_at_zero():
    box = linf_region([0.0], 0.25, clip=(0.0, 1.0))
    assert box == (Interval(0.0, 0.25),)


def test_linf_point_containment():
    rng = random.Random(1)
    for _ in range(1_000):
        x = [rng.random() for _ in range(5)]
        delta = rng.uniform(0, 0.5)
        for iv, xi in zip(linf_region(x, delta), x):
            assert iv.lo <= xi <= iv.hi


def test_linf_exactness_on_representable_inputs():
    # Dyadic x and delta: endpoints must equal the set definition exactly.
    x = [0.5, 0.25, 1.0]
    box = linf_region(x, 0.125, clip=(0.0, 1.0))
    assert box == (Interval(0.375, 0.625), Interval(0.125, 0.375),
                   Interval(0.875, 1.0))


def test_linf_rejects_out_of_clip_input():
    with pytest.raises(ValueError, match="outside clip"):
        linf_region([1.5], 0.1, clip=(0.0, 1.0))


def test_linf_spec_validation():
    with pytest.raises(ValueError):
        LinfSpec(-0.1)
    with pytest.raises(ValueError):
        LinfSpec(0.1, clip=(1.0, 0.0))


def test_frame_4x4_t1_counts():
    x = [i / 16 for i in range(16)]
    box = frame_region(x, 1, 4, 4)
    degenerate = [iv for iv in box if iv.lo == iv.hi]
    border = [iv for iv in box if (iv.lo, iv.hi) == (0.0, 1.0)]
    assert len(degenerate) == 4 and len(border) == 12
    # interior pixels are rows/cols 1..2
    for r in range(4):
        for c in range(4):
            iv = box[r * 4 + c]
            if 1 <= r <= 2 and 1 <= c <= 2:
                assert (iv.lo, iv.hi) == (x[r * 4 + c], x[r * 4 + c])


def test_frame_all_border_at_max_thickness():
    x = [0.5] * 16
    box = frame_region(x, 2, 4, 4)
    assert all((iv.lo, iv.hi) == (0.0, 1.0) for iv in box)


def test_frame_28x28_t2_interior_preserved():
    x = [((i * 37) % 256) / 255 for i in range(28 * 28)]
    box = frame_region(x, 2, 28, 28)
    interior = [(r, c) for r in range(2, 26) for c in range(2, 26)]
    assert len(interior) == 24 * 24
    for r, c in interior:
        iv = box[r * 28 + c]
        assert iv.lo == iv.hi == x[r * 28 + c]
    assert sum(1 for iv in box if iv.lo != iv.hi or iv.lo != iv.hi) \
        == sum(1 for iv in box if iv.lo != iv.hi)


def test_frame_validation():
    with pytest.raises(ValueError):
        frame_region([0.0] * 15, 1, 4, 4)
    with pytest.raises(ValueError):
        frame_region([0.0] * 16, 3, 4, 4)
    with pytest.raises(ValueError):
        FrameSpec(0, 4, 4)


def test_region_to_raf_golden():
    box = (Interval(4.0, 6.0), Interval(0.0, 2.0))
    vec = region_to_raf(box)
    assert vec[0].center == 5.0 and vec[0].coeffs == (1.0, 0.0)
    assert vec[1].center == 1.0 and vec[1].coeffs == (0.0, 1.0)
    assert vec[0].noise == vec[1].noise == 0.0


def test_region_to_raf_degenerate():
    vec = region_to_raf((Interval(0.3, 0.3),))
    assert vec[0].center == 0.3 and vec[0].coeffs == (0.0,) and vec[0].noise == 0.0


def test_region_to_raf_roundtrip_width():
    rng = random.Random(2)
    for _ in range(2_000):
        lo = rng.uniform(-5, 5)
        hi = lo + abs(rng.uniform(0, 2))
        box = (Interval(lo, hi),)
        iv = to_interval(region_to_raf(box)[0])
        assert iv.lo <= lo and hi <= iv.hi
        inflation = (Fraction(iv.hi) - Fraction(iv.lo)) - (Fraction(hi) - Fraction(lo))
        assert inflation <= 4 * Fraction(max(abs(lo), abs(hi), 1.0)) * Fraction(2) ** -52
