"""Directed-rounding scalar arithmetic on IEEE-754 binary64.

Every primitive here can be evaluated with the result rounded toward
-inf (``down``) or +inf (``up``), which is what makes interval and
affine-form enclosures sound under floating point.  No hardware
rounding-mode switching is used: for ``+ - * /`` and ``sqrt`` we compute
the round-to-nearest result together with the *exact* sign of its
residual (error-free transformations: Knuth's twoSum, Dekker's twoProd),
which identifies the correctly rounded directed neighbour.  For the
transcendentals ``exp``/``ln`` we take the libm result and nudge it
outward by two ulps; libm on the supported platforms is well within
1 ulp of exact, so a 2-ulp pad is a documented, conservative bound.

Conventions enforced throughout:

* NaN never enters or leaves this module; a NaN operand or a NaN-producing
  combination (inf - inf, 0 * inf, ...) raises :class:`NanOperandError`.
* Results whose exact value exceeds the finite range saturate: the
  directions pointing past the range give +/-inf, the opposite directions
  give the largest-magnitude finite float.  Nothing ever wraps.

Thread safety: all functions are pure and touch no process-global state
(in particular the C floating-point environment is never modified), so
they may be called freely from concurrent verification tasks.
"""

from __future__ import annotations

import math

__all__ = [
    "NanOperandError",
    "DomainError",
    "MAX_FLOAT",
    "add_bounds",
    "sub_bounds",
    "mul_bounds",
    "div_bounds",
    "sqrt_bounds",
    "exp_bounds",
    "ln_bounds",
    "dir_op",
]

MAX_FLOAT = math.ldexp(2.0 - 2.0**-52, 1023)  # 1.7976931348623157e308
_INF = math.inf

# Dekker's splitting constant for binary64 (2**27 + 1).
_SPLITTER = 134217729.0

# |x| above this, split() overflows; |product| below _TINY, the twoProd
# error term may be inexact (subnormal).  Both cases take a conservative
# 1-ulp outward bracket instead.
_BIG = math.ldexp(1.0, 995)
_TINY = math.ldexp(1.0, -1015)


class NanOperandError(ValueError):
    """A NaN operand, or an operation that would produce NaN."""


class DomainError(ValueError):
    """Operand outside the mathematical domain (ln of nonpositive, ...)."""


def _check(a: float) -> None:
    if math.isnan(a):
        raise NanOperandError("NaN operand")


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _saturate(nearest: float) -> tuple[float, float]:
    # nearest overflowed to +/-inf although the exact value is finite.
    if nearest > 0:
        return MAX_FLOAT, _INF
    return -_INF, -MAX_FLOAT


def _from_residual(nearest: float, residual_sign: int) -> tuple[float, float]:
    """(down, up) for an exact value ``nearest + residual``.

    ``residual_sign`` is the exact sign of (exact - nearest); since
    ``nearest`` is the round-to-nearest result, the exact value lies
    strictly between adjacent floats, so one neighbour step suffices.
    """
    if residual_sign > 0:
        return nearest, _up(nearest)
    if residual_sign < 0:
        return _down(nearest), nearest
    return nearest, nearest


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _sign(x: float) -> int:
    return (x > 0.0) - (x < 0.0)


def add_bounds(a: float, b: float) -> tuple[float, float]:
    """Correctly rounded-down and rounded-up a + b."""
    _check(a)
    _check(b)
    s = a + b
    if math.isnan(s):
        raise NanOperandError("inf - inf has no value")
    if math.isinf(s):
        if math.isinf(a) or math.isinf(b):
            return s, s  # exact saturation marker in, marker out
        return _saturate(s)
    if math.isinf(a) or math.isinf(b):  # pragma: no cover - unreachable
        return s, s
    _, err = _two_sum(a, b)
    return _from_residual(s, _sign(err))


def sub_bounds(a: float, b: float) -> tuple[float, float]:
    _check(b)
    return add_bounds(a, -b)


def mul_bounds(a: float, b: float) -> tuple[float, float]:
    """Correctly rounded-down and rounded-up a * b (1-ulp bracket near
    the subnormal/overflow fringes)."""
    _check(a)
    _check(b)
    p = a * b
    if math.isnan(p):
        raise NanOperandError("0 * inf has no value")
    if math.isinf(p):
        if math.isinf(a) or math.isinf(b):
            return p, p
        return _saturate(p)
    if math.isinf(a) or math.isinf(b):
        return p, p  # signed zero times infinity was caught above
    if p == 0.0 and (a == 0.0 or b == 0.0):
        return 0.0, 0.0
    aa, ab = abs(a), abs(b)
    if aa > _BIG or ab > _BIG or (p != 0.0 and abs(p) < _TINY) or p == 0.0:
        # Splitting would overflow, or the error term may be denormalised:
        # fall back to a guaranteed (possibly 1 ulp wide) outward bracket.
        return _down(p), _up(p)
    _, err = _two_prod(a, b)
    return _from_residual(p, _sign(err))


def div_bounds(a: float, b: float) -> tuple[float, float]:
    """Correctly rounded-down and rounded-up a / b.  ``b`` must be nonzero."""
    _check(a)
    _check(b)
    if b == 0.0:
        raise DomainError("division by zero")
    q = a / b
    if math.isnan(q):
        raise NanOperandError("inf / inf has no value")
    if math.isinf(q):
        if math.isinf(a):
            return q, q
        return _saturate(q)
    if math.isinf(a) or math.isinf(b) or q == 0.0 and a == 0.0:
        return q, q
    # Residual r = a - q*b decides on which side of q the exact quotient
    # lies (sign of r/b).  q*b is expanded exactly with twoProd and
    # a - p is exact by Sterbenz whenever p is within a factor 2 of a.
    p, e = _two_prod(q, b)
    if math.isinf(p) or abs(a) > _BIG * 2 or abs(b) > _BIG or (
        a != 0.0 and abs(a) < _TINY
    ) or (p != 0.0 and abs(p) < _TINY):
        return _down(q), _up(q)
    d = a - p
    r_sign = _sign(d - e)
    return _from_residual(q, r_sign * _sign(b))


def sqrt_bounds(a: float) -> tuple[float, float]:
    _check(a)
    if a < 0.0:
        raise DomainError("sqrt of negative value")
    if a == 0.0 or math.isinf(a):
        return a, a
    s = math.sqrt(a)
    if a < _TINY or a > _BIG:
        return max(0.0, _down(s)), _up(s)
    p, e = _two_prod(s, s)
    d = a - p
    return _from_residual(s, _sign(d - e))


def exp_bounds(a: float) -> tuple[float, float]:
    """Enclosure of e**a: libm round-to-nearest nudged outward 2 ulps
    (assumed libm error bound, see module docstring); exact special
    points are returned exactly."""
    _check(a)
    if a == 0.0:
        return 1.0, 1.0
    if a == -_INF:
        return 0.0, 0.0
    if a == _INF:
        return _INF, _INF
    try:
        v = math.exp(a)
    except OverflowError:
        return MAX_FLOAT, _INF
    if math.isinf(v):
        return MAX_FLOAT, _INF
    lo = max(0.0, _down(_down(v)))
    hi = _up(_up(v))
    return lo, hi


def ln_bounds(a: float) -> tuple[float, float]:
    _check(a)
    if a <= 0.0:
        raise DomainError("ln of nonpositive value")
    if a == 1.0:
        return 0.0, 0.0
    if a == _INF:
        return _INF, _INF
    v = math.log(a)
    return _down(_down(v)), _up(_up(v))


_BINARY = {
    "add": add_bounds,
    "sub": sub_bounds,
    "mul": mul_bounds,
    "div": div_bounds,
}
_UNARY = {
    "exp": exp_bounds,
    "ln": ln_bounds,
    "sqrt": sqrt_bounds,
}


def dir_op(op: str, a: float, b: float | None = None, direction: str = "down") -> float:
    """Evaluate ``op`` on the operand(s) with rounding directed toward
    -inf (``direction="down"``) or +inf (``"up"``)."""
    if direction not in ("down", "up"):
        raise ValueError(f"unknown rounding direction {direction!r}")
    if op in _BINARY:
        if b is None:
            raise TypeError(f"{op} needs two operands")
        lo, hi = _BINARY[op](a, b)
    elif op in _UNARY:
        if b is not None:
            raise TypeError(f"{op} takes a single operand")
        lo, hi = _UNARY[op](a)
    else:
        raise ValueError(f"unknown operation {op!r}")
    return lo if direction == "down" else hi
