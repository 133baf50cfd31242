"""Nonrelational interval domain with floating-point-sound operations.

Endpoints are binary64 floats (possibly +/-inf); every operation rounds
its lower endpoint toward -inf and its upper endpoint toward +inf via
:mod:`svmcert.rounding`, so the returned interval always encloses the
exact real-arithmetic image.  On inputs whose exact results are
representable, results are exact (no spurious widening).

The empty interval is the distinct singleton :data:`BOTTOM`; it is
absorbing for every operation and can never be constructed as an
invalid ``lo > hi`` pair.

Values are immutable and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from . import rounding as rd

__all__ = [
    "Interval",
    "BOTTOM",
    "Box",
    "iv_add",
    "iv_sub",
    "iv_scale",
    "iv_mul",
    "iv_pow",
    "iv_monotone",
    "iv_meet",
    "iv_contains",
    "iv_width",
]


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]; endpoints may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise rd.NanOperandError("NaN interval endpoint")
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def is_bottom(self) -> bool:
        return self.lo > self.hi

    def __repr__(self):
        if self.is_bottom:
            return "Interval(BOTTOM)"
        return f"Interval({self.lo!r}, {self.hi!r})"


def _make_bottom() -> Interval:
    iv = object.__new__(Interval)
    object.__setattr__(iv, "lo", math.inf)
    object.__setattr__(iv, "hi", -math.inf)
    return iv


#: The empty interval.  Only this instance has ``lo > hi``.
BOTTOM = _make_bottom()

# A box is the componentwise product of intervals.
Box = Sequence[Interval]


def iv_contains(a: Interval, x: float) -> bool:
    return not a.is_bottom and a.lo <= x <= a.hi


def iv_width(a: Interval) -> float:
    if a.is_bottom:
        return 0.0
    return rd.sub_bounds(a.hi, a.lo)[1]


def iv_add(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    return Interval(rd.add_bounds(a.lo, b.lo)[0], rd.add_bounds(a.hi, b.hi)[1])


def iv_sub(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    return Interval(rd.sub_bounds(a.lo, b.hi)[0], rd.sub_bounds(a.hi, b.lo)[1])


def _scale_term(z: float, e: float) -> tuple[float, float]:
    # 0 * (+/-inf) = 0 by the domain's convention for scalar multiplication.
    if z == 0.0:
        return 0.0, 0.0
    if math.isinf(e):
        v = e if z > 0 else -e
        return v, v
    return rd.mul_bounds(z, e)


def iv_scale(z: float, a: Interval) -> Interval:
    """Exact abstract multiplication by the scalar ``z`` (endpoints swap
    for negative ``z``)."""
    if math.isnan(z):
        raise rd.NanOperandError("NaN scale factor")
    if math.isinf(z):
        raise ValueError("scale factor must be finite")
    if a.is_bottom:
        return BOTTOM
    lo_b, hi_b = _scale_term(z, a.lo), _scale_term(z, a.hi)
    if z >= 0:
        return Interval(lo_b[0], hi_b[1])
    return Interval(hi_b[0], lo_b[1])


def _corner(x: float, y: float) -> tuple[float, float]:
    if (x == 0.0 and math.isinf(y)) or (y == 0.0 and math.isinf(x)):
        return 0.0, 0.0  # saturation marker times degenerate zero endpoint
    return rd.mul_bounds(x, y)


def iv_mul(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    corners = [_corner(a.lo, b.lo), _corner(a.lo, b.hi),
               _corner(a.hi, b.lo), _corner(a.hi, b.hi)]
    return Interval(min(c[0] for c in corners), max(c[1] for c in corners))


def _pow_mag_bounds(x: float, d: int) -> tuple[float, float]:
    """Bounds for x**d with x >= 0 (monotone directed product chains)."""
    if math.isinf(x):
        return x, x
    lo = hi = 1.0
    for _ in range(d):
        lo = rd.mul_bounds(lo, x)[0]
        hi = rd.mul_bounds(hi, x)[1]
    return lo, hi


def iv_pow(a: Interval, d: int) -> Interval:
    """The dependent power {x**d | x in a} (not iterated independent
    multiplication): even powers straddling zero get a zero lower bound."""
    if d < 1:
        raise ValueError("exponent must be a positive integer")
    if a.is_bottom:
        return BOTTOM
    if d == 1:
        return a
    if d % 2 == 1:
        sgn_lo = -1.0 if a.lo < 0 else 1.0
        sgn_hi = -1.0 if a.hi < 0 else 1.0
        lo_m = _pow_mag_bounds(abs(a.lo), d)
        hi_m = _pow_mag_bounds(abs(a.hi), d)
        return Interval(sgn_lo * lo_m[1 if sgn_lo < 0 else 0],
                        sgn_hi * hi_m[0 if sgn_hi < 0 else 1])
    # even power: |x| range decides
    m_lo, m_hi = abs(a.lo), abs(a.hi)
    if a.lo <= 0.0 <= a.hi:
        return Interval(0.0, _pow_mag_bounds(max(m_lo, m_hi), d)[1])
    lo_m = _pow_mag_bounds(min(m_lo, m_hi), d)
    hi_m = _pow_mag_bounds(max(m_lo, m_hi), d)
    return Interval(lo_m[0], hi_m[1])


_MONOTONE_INC: dict[str, Callable[[float], tuple[float, float]]] = {
    "exp": rd.exp_bounds,
}


def iv_monotone(f: str, a: Interval) -> Interval:
    """Transformer for a continuous monotonically increasing function:
    f([l,u]) = [f(l) rounded down, f(u) rounded up]."""
    try:
        bounds = _MONOTONE_INC[f]
    except KeyError:
        raise ValueError(f"no monotone transformer registered for {f!r}") from None
    if a.is_bottom:
        return BOTTOM
    return Interval(bounds(a.lo)[0], bounds(a.hi)[1])


def iv_meet(a: Interval, b: Interval) -> Interval:
    if a.is_bottom or b.is_bottom:
        return BOTTOM
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return BOTTOM
    return Interval(lo, hi)
