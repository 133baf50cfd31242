"""Adversarial region construction.

Two region families, both exactly representable as boxes (and hence as
RAF vectors): the L-infinity ball of radius delta around a point,
optionally clipped to a validity range, and the border frame of an
image, where a band of ``thickness`` pixels around the edge may take any
value in [0, 1] while the interior is pinned.

Pixel layout for frames is row-major; indices in this API are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import rounding as rd
from .interval import Box, Interval
from .raf import RAF, RafVec, raf_from_interval

__all__ = [
    "LinfSpec",
    "FrameSpec",
    "PerturbationSpec",
    "linf_region",
    "frame_region",
    "region_to_raf",
]


@dataclass(frozen=True)
class LinfSpec:
    delta: float
    clip: tuple[float, float] | None = (0.0, 1.0)

    def __post_init__(self):
        if math.isnan(self.delta) or self.delta < 0.0:
            raise ValueError("delta must be nonnegative")
        if self.clip is not None and not self.clip[0] <= self.clip[1]:
            raise ValueError("clip range must satisfy lo <= hi")

    def region(self, x: Sequence[float]) -> Box:
        return linf_region(x, self.delta, self.clip)


@dataclass(frozen=True)
class FrameSpec:
    thickness: int
    height: int
    width: int

    def __post_init__(self):
        if self.thickness < 1 or self.thickness > min(self.height, self.width) / 2:
            raise ValueError("thickness must be in [1, min(h, w)/2]")

    def region(self, x: Sequence[float]) -> Box:
        return frame_region(x, self.thickness, self.height, self.width)


PerturbationSpec = LinfSpec | FrameSpec


def linf_region(x: Sequence[float], delta: float,
                clip: tuple[float, float] | None = (0.0, 1.0)) -> Box:
    """Componentwise [x_i - delta, x_i + delta], intersected with the
    clip range.  The delta arithmetic rounds outward; the clip bounds
    are exact, so clipping never widens the region."""
    box = []
    for i, xi in enumerate(x):
        xi = float(xi)
        if clip is not None and not clip[0] <= xi <= clip[1]:
            raise ValueError(f"component {i} = {xi} outside clip range {clip}")
        lo = rd.sub_bounds(xi, delta)[0]
        hi = rd.add_bounds(xi, delta)[1]
        if clip is not None:
            lo = max(lo, clip[0])
            hi = min(hi, clip[1])
        box.append(Interval(lo, hi))
    return tuple(box)


def frame_region(x: Sequence[float], thickness: int, height: int, width: int) -> Box:
    """Interior pixels stay degenerate at their value; pixels within
    ``thickness`` of the border range over [0, 1]."""
    if len(x) != height * width:
        raise ValueError(f"expected {height}x{width}={height * width} pixels, got {len(x)}")
    if not 1 <= thickness <= min(height, width) / 2:
        raise ValueError("thickness must be in [1, min(h, w)/2]")
    t = thickness
    box = []
    for r in range(height):
        interior_row = t <= r < height - t
        for c in range(width):
            xi = float(x[r * width + c])
            if interior_row and t <= c < width - t:
                box.append(Interval(xi, xi))
            else:
                box.append(Interval(0.0, 1.0))
    return tuple(box)


def region_to_raf(box: Box) -> RafVec:
    """Relational view of a box: component j becomes
    center_j + radius_j * eps_j (midpoint slack folded into the noise)."""
    n = len(box)
    return tuple(raf_from_interval(iv, j, n) for j, iv in enumerate(box))
