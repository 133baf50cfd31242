"""Independent reference computations used by the test suite.

Everything here is deliberately built on a different substrate than the
package under test: exact rational arithmetic (``fractions.Fraction``)
for the field operations, and high-precision decimal arithmetic
(``decimal`` at 60 significant digits, roughly a 200-bit mantissa) for
the transcendentals.  None of it imports the package's numeric kernels.
"""

from __future__ import annotations

import math
from decimal import Decimal, getcontext
from fractions import Fraction
from itertools import product

getcontext().prec = 60

# About 1e-55 relative: far below half an ulp of any binary64 quantity
# we compare against, so oracle rounding can never flip an assertion.
DEC_SLOP = Fraction(1, 10**50)


def frac(x: float) -> Fraction:
    return Fraction(x)


def exp_frac(x: float) -> Fraction:
    """e**x as an (essentially exact) rational."""
    return Fraction(Decimal(x).exp())


def ln_frac(x: float) -> Fraction:
    return Fraction(Decimal(x).ln())


def sqrt_frac(x: float) -> Fraction:
    return Fraction(Decimal(x).sqrt())


RATIONAL_OPS = {
    "add": lambda a, b: frac(a) + frac(b),
    "sub": lambda a, b: frac(a) - frac(b),
    "mul": lambda a, b: frac(a) * frac(b),
    "div": lambda a, b: frac(a) / frac(b),
}


def float_is_greatest_leq(x: float, value: Fraction) -> bool:
    """Is ``x`` the greatest binary64 float <= ``value``?"""
    if Fraction(x) > value:
        return False
    nxt = math.nextafter(x, math.inf)
    return math.isinf(nxt) or Fraction(nxt) > value


def float_is_least_geq(x: float, value: Fraction) -> bool:
    if Fraction(x) < value:
        return False
    nxt = math.nextafter(x, -math.inf)
    return math.isinf(nxt) or Fraction(nxt) < value


# ---------------------------------------------------------------------------
# Interval oracle: exact rational endpoint arithmetic.
# ---------------------------------------------------------------------------

def interval_add(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    return a[0] + b[0], a[1] + b[1]


def interval_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    corners = [x * y for x in a for y in b]
    return min(corners), max(corners)


def interval_scale(z: Fraction, a: tuple[Fraction, Fraction]):
    lo, hi = z * a[0], z * a[1]
    return (hi, lo) if lo > hi else (lo, hi)


def interval_pow(a: tuple[Fraction, Fraction], d: int):
    lo, hi = a
    cands = [lo**d, hi**d]
    if d % 2 == 0 and lo <= 0 <= hi:
        cands.append(Fraction(0))
    return min(cands), max(cands)


# ---------------------------------------------------------------------------
# Bilinear-form oracle: extrema of
#     f(e, ea, eb) = (sum_j a_j e_j + ar ea) * (sum_j b_j e_j + br eb)
# over the hypercube, by dense grid + exact per-axis quadratic descent.
# ---------------------------------------------------------------------------

def _bilinear_value(a, ar, b, br, e, ea, eb) -> Fraction:
    u = sum(Fraction(aj) * Fraction(ej) for aj, ej in zip(a, e)) + Fraction(ar) * Fraction(ea)
    v = sum(Fraction(bj) * Fraction(ej) for bj, ej in zip(b, e)) + Fraction(br) * Fraction(eb)
    return u * v


def _axis_refine(a, ar, b, br, e, ea, eb, maximize: bool):
    """Coordinate descent with per-axis quadratic optimisation.

    The search runs in floats (each axis section of the form is a
    one-variable quadratic, so the per-axis optimum is closed-form);
    only the final point is evaluated exactly.
    """
    e = list(e)
    k = len(e)
    sgn = 1.0 if maximize else -1.0
    for _ in range(60):
        changed = False
        for j in range(k):
            rest_u = sum(a[i] * e[i] for i in range(k) if i != j) + ar * ea
            rest_v = sum(b[i] * e[i] for i in range(k) if i != j) + br * eb
            aj, bj = a[j], b[j]
            cands = [-1.0, 1.0]
            c2 = aj * bj
            if c2 != 0.0:
                t = -(rest_u * bj + rest_v * aj) / (2.0 * c2)
                if -1.0 < t < 1.0:
                    cands.append(t)
            vals = [sgn * (rest_u + aj * t) * (rest_v + bj * t) for t in cands]
            best = max(range(len(cands)), key=lambda i: vals[i])
            if e[j] != cands[best]:
                e[j] = cands[best]
                changed = True
        # ea, eb enter bilinearly: corner values suffice.
        u = sum(a[i] * e[i] for i in range(k))
        v = sum(b[i] * e[i] for i in range(k))
        best_ea, best_eb, best_val = ea, eb, None
        for ca in (-1.0, 1.0):
            for cb in (-1.0, 1.0):
                val = sgn * (u + ar * ca) * (v + br * cb)
                if best_val is None or val > best_val:
                    best_val, best_ea, best_eb = val, ca, cb
        if (best_ea, best_eb) != (ea, eb):
            ea, eb, changed = best_ea, best_eb, True
        if not changed:
            break
    return _bilinear_value(a, ar, b, br, e, ea, eb)


def bilinear_range_oracle(a, ar, b, br, grid: int = 5):
    """(min, max) of the bilinear noise form: dense grid starts plus
    per-axis-quadratic coordinate descent, exact final evaluation."""
    k = len(a)
    pts = [2.0 * i / (grid - 1) - 1.0 for i in range(grid)]
    lo = hi = None
    for e in product(pts, repeat=k):
        for ea in (-1.0, 1.0):
            for eb in (-1.0, 1.0):
                hi_c = _axis_refine(a, ar, b, br, e, ea, eb, maximize=True)
                lo_c = _axis_refine(a, ar, b, br, e, ea, eb, maximize=False)
                if lo is None or lo_c < lo:
                    lo = lo_c
                if hi is None or hi_c > hi:
                    hi = hi_c
    return lo, hi


def bilinear_vertex_oracle(a, ar, b, br):
    """(min, max) of the bilinear noise form over hypercube vertices only."""
    k = len(a)
    lo = hi = None
    for signs in product((-1, 1), repeat=k):
        u = sum(Fraction(aj) * s for aj, s in zip(a, signs))
        v = sum(Fraction(bj) * s for bj, s in zip(b, signs))
        for sa in (-1, 1):
            for sb in (-1, 1):
                val = (u + Fraction(ar) * sa) * (v + Fraction(br) * sb)
                if lo is None or val < lo:
                    lo = val
                if hi is None or val > hi:
                    hi = val
    return lo, hi
