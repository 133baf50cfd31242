"""Reduced affine forms: relational enclosures of fixed length.

A value here is ``a0 + sum_j a_j * eps_j + a_r * eps_noise`` where the
``eps`` symbols range over [-1, 1].  The ``eps_j`` are permanently bound
to input features (no fresh symbols are ever created), while the single
nonnegative ``a_r`` accumulates every nonlinear-approximation and
floating-point error committed along the computation.  The length ``n``
is fixed at construction and preserved by every operation.

Floating-point soundness discipline: every derived coefficient is first
computed as a directed-rounding enclosure, then a representative inside
the enclosure is stored and the enclosure's (up-rounded) half-width is
added to the noise term.  Exactly representable computations therefore
stay exact.

The bilinear noise form arising in multiplication,

    f(eps, ea, eb) = (sum a_j eps_j + a_r ea) * (sum b_j eps_j + b_r eb),

is ranged in two modes.  ``exact`` (the default) computes the true
minimum and maximum of ``f`` over the hypercube: the image of the linear
parts is a centrally symmetric polygon (a zonogon whose generators are
the coefficient pairs, plus one axis generator each for ``ea``/``eb``),
the product ``u*v`` attains its extrema on the polygon's boundary, and
each boundary edge restricts ``u*v`` to a one-variable quadratic.  The
walk is performed in exact rational arithmetic and only the final two
bounds are rounded outward, so the result is sound and tight.
``vertex`` restricts the search to hypercube vertices (enumerated
exactly up to a size limit, heuristically above it); it matches the
convention of hand computations that range the residual over sign
patterns only, and is NOT guaranteed to enclose interior extrema of
``f``.  Use ``exact`` whenever soundness matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from . import rounding as rd
from .interval import BOTTOM, Interval

__all__ = [
    "RAF",
    "RafVec",
    "BilinearRange",
    "LengthMismatchError",
    "raf_const",
    "raf_from_interval",
    "raf_add",
    "raf_sub",
    "raf_neg",
    "raf_scale",
    "bilinear_range",
    "raf_mul",
    "raf_pow",
    "raf_exp",
    "to_interval",
    "evaluate",
]

_INF = math.inf

# Chord slope of exp degenerates below this input width; fall back to a
# constant enclosure there.
DEGENERATE_WIDTH = 1e-12

# Exhaustive vertex enumeration up to this many nonzero coefficient
# pairs; beyond it the vertex mode falls back to candidate patterns.
_VERTEX_ENUM_LIMIT = 12


class LengthMismatchError(ValueError):
    """RAFs of different lengths were combined."""


@dataclass(frozen=True)
class RAF:
    center: float
    coeffs: tuple[float, ...]
    noise: float  # radius of the accumulated-error term, >= 0

    def __post_init__(self):
        for v in (self.center, *self.coeffs, self.noise):
            if math.isnan(v):
                raise rd.NanOperandError("NaN in reduced affine form")
            if math.isinf(v):
                raise OverflowError("reduced affine form coefficient overflow")
        if self.noise < 0.0:
            raise ValueError("noise radius must be nonnegative")

    def __len__(self):
        return len(self.coeffs)


RafVec = Sequence[RAF]


@dataclass(frozen=True)
class BilinearRange:
    rmin: float
    rmax: float

    def __post_init__(self):
        if self.rmin > self.rmax:
            raise ValueError("rmin must not exceed rmax")


def _check_lengths(a: RAF, b: RAF) -> None:
    if len(a) != len(b):
        raise LengthMismatchError(f"length {len(a)} vs {len(b)}")


def _rep_slack(lo: float, hi: float) -> tuple[float, float]:
    """A stored representative inside [lo, hi] plus an up-rounded bound
    on its distance to either end."""
    if lo == hi:
        return lo, 0.0
    rep = lo + 0.5 * (hi - lo)
    rep = min(max(rep, lo), hi)
    return rep, max(rd.sub_bounds(hi, rep)[1], rd.sub_bounds(rep, lo)[1])


def _iv_rep(iv: Interval) -> tuple[float, float]:
    return _rep_slack(iv.lo, iv.hi)


def _up_sum(*vals: float) -> float:
    s = 0.0
    for v in vals:
        s = rd.add_bounds(s, v)[1]
    return s


def _mul_iv(x: float, y: float) -> Interval:
    return Interval(*rd.mul_bounds(x, y))


def raf_const(c: float, n: int) -> RAF:
    return RAF(c, (0.0,) * n, 0.0)


def raf_from_interval(iv: Interval, position: int, n: int) -> RAF:
    """The RAF (l+u)/2 + (u-l)/2 * eps_position enclosing ``iv``,
    rounding slack folded into the noise term.  ``position`` is the
    0-based feature index."""
    if iv.is_bottom:
        raise ValueError("cannot build a RAF from the empty interval")
    if math.isinf(iv.lo) or math.isinf(iv.hi):
        raise ValueError("unbounded intervals have no RAF representation")
    if not 0 <= position < n:
        raise IndexError(f"position {position} out of range for length {n}")
    half = 0.5 * (iv.hi - iv.lo)
    center = iv.lo + half
    center = min(max(center, iv.lo), iv.hi)
    half = max(half, 0.0)
    # Widen the noise term until center +/- (half + noise) covers iv.
    lo_need = rd.sub_bounds(rd.sub_bounds(center, half)[1], iv.lo)[1]
    hi_need = rd.sub_bounds(iv.hi, rd.add_bounds(center, half)[0])[1]
    noise = max(0.0, lo_need, hi_need)
    coeffs = [0.0] * n
    coeffs[position] = half
    return RAF(center, tuple(coeffs), noise)


def raf_add(a: RAF, b: RAF) -> RAF:
    _check_lengths(a, b)
    c, slack_c = _iv_rep(Interval(*rd.add_bounds(a.center, b.center)))
    coeffs = []
    slacks = [slack_c]
    for x, y in zip(a.coeffs, b.coeffs):
        v, s = _iv_rep(Interval(*rd.add_bounds(x, y)))
        coeffs.append(v)
        if s:
            slacks.append(s)
    return RAF(c, tuple(coeffs), _up_sum(a.noise, b.noise, *slacks))


def raf_neg(a: RAF) -> RAF:
    return RAF(-a.center, tuple(-x for x in a.coeffs), a.noise)


def raf_sub(a: RAF, b: RAF) -> RAF:
    return raf_add(a, raf_neg(b))


def raf_scale(z: float, a: RAF) -> RAF:
    if math.isnan(z) or math.isinf(z):
        raise rd.NanOperandError("scale factor must be finite")
    if z == 0.0:
        return raf_const(0.0, len(a))
    c, slack_c = _iv_rep(_mul_iv(z, a.center))
    coeffs = []
    slacks = [slack_c]
    for x in a.coeffs:
        v, s = _iv_rep(_mul_iv(z, x))
        coeffs.append(v)
        if s:
            slacks.append(s)
    return RAF(c, tuple(coeffs), _up_sum(rd.mul_bounds(abs(z), a.noise)[1], *slacks))


def to_interval(a: RAF) -> Interval:
    """[center - radius, center + radius] with the radius rounded up."""
    rad = _up_sum(*(abs(x) for x in a.coeffs), a.noise)
    return Interval(rd.sub_bounds(a.center, rad)[0], rd.add_bounds(a.center, rad)[1])


def evaluate(a: RAF, eps: Sequence[float], eps_noise: float = 0.0) -> float:
    """Point evaluation (test/diagnostic helper, round-to-nearest)."""
    acc = a.center
    for c, e in zip(a.coeffs, eps):
        acc += c * e
    return acc + a.noise * eps_noise


# ---------------------------------------------------------------------------
# Bilinear noise-form range.
# ---------------------------------------------------------------------------

_MAXF = Fraction(rd.MAX_FLOAT)


def _frac_down(fr: Fraction) -> float:
    if fr > _MAXF:
        return rd.MAX_FLOAT
    if fr < -_MAXF:
        return -_INF
    f = float(fr)
    if Fraction(f) > fr:
        f = math.nextafter(f, -_INF)
    return f


def _frac_up(fr: Fraction) -> float:
    if fr > _MAXF:
        return _INF
    if fr < -_MAXF:
        return -rd.MAX_FLOAT
    f = float(fr)
    if Fraction(f) < fr:
        f = math.nextafter(f, _INF)
    return f


def _edge_extrema(pu: Fraction, pv: Fraction, du: Fraction, dv: Fraction):
    """Extrema of (pu + t du)(pv + t dv) over t in [0, 1], exactly."""
    c2 = du * dv
    c1 = pu * dv + pv * du
    c0 = pu * pv
    vals = [c0, c2 + c1 + c0]
    if c2 != 0:
        t = -c1 / (2 * c2)
        if 0 < t < 1:
            vals.append((c2 * t + c1) * t + c0)
    return min(vals), max(vals)


def _zonogon_product_range(gens: list[tuple[Fraction, Fraction]]):
    """Exact (min, max) of u*v over the zonogon spanned by ``gens``.

    The product has no interior extremum (it is a hyperbolic quadric),
    so walking the boundary suffices; central symmetry of the zonogon
    and of u*v lets us walk only half of it.
    """
    gens = [g for g in gens if g[0] != 0 or g[1] != 0]
    if not gens:
        z = Fraction(0)
        return z, z
    norm = []
    for u, v in gens:
        if v < 0 or (v == 0 and u < 0):
            u, v = -u, -v
        norm.append((u, v))

    def by_angle(g1, g2):
        cross = g1[0] * g2[1] - g2[0] * g1[1]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    norm.sort(key=cmp_to_key(by_angle))
    vu = -sum(g[0] for g in norm)
    vv = -sum(g[1] for g in norm)
    lo = hi = vu * vv
    for gu, gv in norm:
        e_lo, e_hi = _edge_extrema(vu, vv, 2 * gu, 2 * gv)
        lo = min(lo, e_lo)
        hi = max(hi, e_hi)
        vu += 2 * gu
        vv += 2 * gv
    return lo, hi


def _greedy_balance(pairs: list[tuple[Fraction, Fraction]], component: int):
    """Sign pattern heuristically minimising |sum of one component|."""
    order = sorted(range(len(pairs)), key=lambda i: -abs(pairs[i][component]))
    signs = [1] * len(pairs)
    s = Fraction(0)
    for i in order:
        c = pairs[i][component]
        signs[i] = -1 if (s > 0) == (c > 0) and c != 0 else 1
        s += signs[i] * c
    return signs


def _vertex_product_range(pairs, ar: Fraction, br: Fraction):
    k = len(pairs)
    patterns: list[tuple[int, ...]]
    if k <= _VERTEX_ENUM_LIMIT:
        patterns = []
        for bits in range(1 << k):
            patterns.append(tuple(1 if bits >> i & 1 else -1 for i in range(k)))
    else:
        # Heuristic candidate set: factor-aligned, anti-aligned and
        # greedily balanced patterns (documented approximation).
        base = []
        for comp in (0, 1):
            base.append(tuple(1 if p[comp] >= 0 else -1 for p in pairs))
            base.append(_greedy_balance(pairs, comp))
        patterns = []
        for p in base:
            patterns.append(tuple(p))
            patterns.append(tuple(-s for s in p))
    lo = hi = None
    for signs in patterns:
        u = sum(s * p[0] for s, p in zip(signs, pairs))
        v = sum(s * p[1] for s, p in zip(signs, pairs))
        for sa in (-1, 1):
            for sb in (-1, 1):
                val = (u + sa * ar) * (v + sb * br)
                if lo is None or val < lo:
                    lo = val
                if hi is None or val > hi:
                    hi = val
    return lo, hi


def bilinear_range(a: RAF, b: RAF, mode: str = "exact") -> BilinearRange:
    """Range of the multiplication noise form over the eps hypercube."""
    _check_lengths(a, b)
    pairs = [(Fraction(x), Fraction(y))
             for x, y in zip(a.coeffs, b.coeffs) if x != 0.0 or y != 0.0]
    ar, br = Fraction(a.noise), Fraction(b.noise)
    if mode == "exact":
        gens = list(pairs)
        if ar:
            gens.append((ar, Fraction(0)))
        if br:
            gens.append((Fraction(0), br))
        lo, hi = _zonogon_product_range(gens)
    elif mode == "vertex":
        lo, hi = _vertex_product_range(pairs, ar, br)
    else:
        raise ValueError(f"unknown bilinear mode {mode!r}")
    return BilinearRange(_frac_down(lo), _frac_up(hi))


def raf_mul(a: RAF, b: RAF, mode: str = "exact") -> RAF:
    """Multiplication with the minimal-radius linear part
    a0*b0 + sum (a0 b_j + b0 a_j) eps_j, the range of the residual
    bilinear form centered into the result."""
    _check_lengths(a, b)
    rng = bilinear_range(a, b, mode)
    shift = Interval(*rd.add_bounds(rng.rmin, rng.rmax))
    c_iv = Interval(
        rd.add_bounds(rd.mul_bounds(a.center, b.center)[0],
                      rd.mul_bounds(0.5, shift.lo)[0])[0],
        rd.add_bounds(rd.mul_bounds(a.center, b.center)[1],
                      rd.mul_bounds(0.5, shift.hi)[1])[1],
    )
    c, slack_c = _iv_rep(c_iv)
    coeffs = []
    slacks = [slack_c]
    for x, y in zip(a.coeffs, b.coeffs):
        lo = rd.add_bounds(rd.mul_bounds(a.center, y)[0], rd.mul_bounds(b.center, x)[0])[0]
        hi = rd.add_bounds(rd.mul_bounds(a.center, y)[1], rd.mul_bounds(b.center, x)[1])[1]
        v, s = _iv_rep(Interval(lo, hi))
        coeffs.append(v)
        if s:
            slacks.append(s)
    half_spread = rd.mul_bounds(0.5, rd.sub_bounds(rng.rmax, rng.rmin)[1])[1]
    noise = _up_sum(
        rd.mul_bounds(abs(a.center), b.noise)[1],
        rd.mul_bounds(abs(b.center), a.noise)[1],
        half_spread,
        *slacks,
    )
    return RAF(c, tuple(coeffs), noise)


def raf_pow(a: RAF, d: int, mode: str = "exact") -> RAF:
    """Left-to-right iterated multiplication
    (r := a*a; then r := r*a, d-2 more times); the order is normative."""
    if d < 1:
        raise ValueError("exponent must be a positive integer")
    if d == 1:
        return a
    r = raf_mul(a, a, mode)
    for _ in range(3, d + 1):
        r = raf_mul(r, a, mode)
    return r


def raf_exp(a: RAF) -> RAF:
    """Chebyshev (minimax) linear enclosure of e**x over the range of
    ``a``: slope alpha = chord slope, band half-width g/2 where g is the
    chord/tangent gap at x* = ln(alpha); all slack goes to the noise."""
    iv = to_interval(a)
    l, u = iv.lo, iv.hi
    if math.isinf(l) or math.isinf(u):
        raise OverflowError("RAF range saturated before exp")
    el = Interval(*rd.exp_bounds(l))
    eu = Interval(*rd.exp_bounds(u))
    if math.isinf(eu.hi) or math.isinf(eu.lo):
        raise OverflowError("exp overflow on RAF upper bound")
    if u - l < DEGENERATE_WIDTH:
        c, _ = _iv_rep(Interval(el.lo, eu.hi))
        noise = max(rd.sub_bounds(c, el.lo)[1], rd.sub_bounds(eu.hi, c)[1])
        return RAF(c, (0.0,) * len(a), max(noise, 0.0))

    num = Interval(rd.sub_bounds(eu.lo, el.hi)[0], rd.sub_bounds(eu.hi, el.lo)[1])
    den = Interval(rd.sub_bounds(u, l)[0], rd.sub_bounds(u, l)[1])
    alpha = Interval(max(rd.div_bounds(num.lo, den.hi)[0], 0.0),
                     rd.div_bounds(num.hi, den.lo)[1])
    if alpha.lo <= 0.0:
        # Numerically vanished slope: constant enclosure fallback.
        c, _ = _iv_rep(Interval(el.lo, eu.hi))
        noise = max(rd.sub_bounds(c, el.lo)[1], rd.sub_bounds(eu.hi, c)[1])
        return RAF(c, (0.0,) * len(a), max(noise, 0.0))

    from .interval import iv_add, iv_mul, iv_scale, iv_sub  # local, avoids cycle at import

    ln_alpha = Interval(rd.ln_bounds(alpha.lo)[0], rd.ln_bounds(alpha.hi)[1])
    # gap g = e^l - alpha*(l+1) + alpha*ln(alpha), evaluated over the
    # alpha enclosure so the true gap is always covered.
    l1 = Interval(*rd.add_bounds(l, 1.0))
    g = iv_add(iv_sub(el, iv_mul(alpha, l1)), iv_mul(alpha, ln_alpha))
    g_hi = max(g.hi, 0.0)
    g_iv = Interval(min(max(g.lo, 0.0), g_hi), g_hi)
    zeta = iv_sub(iv_sub(el, iv_mul(alpha, Interval(l, l))), iv_scale(0.5, g_iv))
    zeta_rep, zeta_slack = _iv_rep(zeta)
    alpha_rep, alpha_slack = _iv_rep(alpha)

    c_iv = iv_add(_mul_iv(alpha_rep, a.center), Interval(zeta_rep, zeta_rep))
    c, slack_c = _iv_rep(c_iv)
    coeffs = []
    slacks = [slack_c]
    for x in a.coeffs:
        v, s = _iv_rep(_mul_iv(alpha_rep, x))
        coeffs.append(v)
        if s:
            slacks.append(s)
    m = max(abs(l), abs(u))
    noise = _up_sum(
        rd.mul_bounds(0.5, g_hi)[1],
        rd.mul_bounds(alpha_slack, m)[1],
        zeta_slack,
        rd.mul_bounds(alpha_rep, a.noise)[1],
        *slacks,
    )
    return RAF(c, tuple(coeffs), noise)
