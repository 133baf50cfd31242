"""Pure-python (numpy) implementation of the hot abstract-evaluation
kernels.

The abstract decision function of one ovo subproblem touches every
support vector once; batching that work over the support-vector axis is
what makes verification fast.  This module computes, per support
vector, a sound enclosure of the abstract kernel value, in both the
interval domain (endpoint arrays, outward-nudged after every operation,
with norm bounds after reductions) and the RAF domain.

RAF values never materialise their coefficient rows here.  A
perturbation region is axis-aligned (component j is c_j + r_j eps_j
plus a tiny noise ar_j), so the kernel value of support vector i keeps
coefficients proportional to one direction row:

    poly:  k_i = kc_i + lam_i * sum_j (S_ij r_j) eps_j + knn_i
    rbf:   k_i = kc_i + beta_i * sum_j ((c_j - S_ij) r_j) eps_j + knn_i

which makes the pairwise weighted combination a matrix-vector product.
Every stored scalar carries an explicit upper bound on its distance to
the exact real value; all bounds are folded into the final noise term,
so the combined result is sound despite round-to-nearest vector math.

The compiled backend (svmcert._core._speed) implements the same
signatures with directed-rounding loops; see svmcert._core for the
import-time selection.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"

_EPS = 2.0**-53
_ETA = 1e-300
_INFL = 1.0 + 1e-10  # swamps fl error of the error arithmetic itself


def _pad_down(x):
    return np.nextafter(x, -np.inf)


def _pad_up(x):
    return np.nextafter(x, np.inf)


def _sum_err(abs_sum, n: int):
    # any-order float summation of n terms with |terms| summing to abs_sum
    return (abs_sum * (n * _EPS)) * 1.000001 + n * _ETA


def _e_add(z, ex, ey):
    return (ex + ey + _EPS * np.abs(z)) * _INFL + _ETA


def _e_mul(z, x, ex, y, ey):
    return (np.abs(x) * ey + np.abs(y) * ex + ex * ey + _EPS * np.abs(z)) * _INFL + _ETA


# ---------------------------------------------------------------------------
# Interval domain
# ---------------------------------------------------------------------------

def linear_interval(w, rho, lo, hi):
    """Primal-form linear decision over a box, exactly-rounded scalar
    chain (completeness of the linear verifier depends on exactness)."""
    from .. import rounding as rd

    acc_lo = acc_hi = 0.0
    for wj, lj, hj in zip(w, lo, hi):
        wj = float(wj)
        if wj >= 0.0:
            t_lo = rd.mul_bounds(wj, float(lj))[0]
            t_hi = rd.mul_bounds(wj, float(hj))[1]
        else:
            t_lo = rd.mul_bounds(wj, float(hj))[0]
            t_hi = rd.mul_bounds(wj, float(lj))[1]
        acc_lo = rd.add_bounds(acc_lo, t_lo)[0]
        acc_hi = rd.add_bounds(acc_hi, t_hi)[1]
    return rd.sub_bounds(acc_lo, rho)[0], rd.sub_bounds(acc_hi, rho)[1]


def _dot_interval(S, lo, hi):
    n = S.shape[1]
    t_lo = _pad_down(np.where(S >= 0.0, S * lo, S * hi))
    t_hi = _pad_up(np.where(S >= 0.0, S * hi, S * lo))
    d_lo = t_lo.sum(axis=1)
    d_hi = t_hi.sum(axis=1)
    mag = np.maximum(np.abs(t_lo), np.abs(t_hi)).sum(axis=1)
    k = _sum_err(mag, n)
    return _pad_down(d_lo - k), _pad_up(d_hi + k)


def _pow_interval(lo, hi, d: int):
    rel = 4.0 * (d + 2) * _EPS
    mag_lo = np.minimum(np.abs(lo), np.abs(hi))
    mag_hi = np.maximum(np.abs(lo), np.abs(hi))
    p_hi = _pad_up(mag_hi**d * (1.0 + rel) + _ETA)
    p_lo_mag = _pad_down(np.maximum(mag_lo**d * (1.0 - rel) - _ETA, 0.0))
    straddles = (lo <= 0.0) & (hi >= 0.0)
    if d % 2 == 0:
        out_lo = np.where(straddles, 0.0, p_lo_mag)
        return out_lo, p_hi
    # odd power is monotone endpointwise
    lo_mag = _pad_up(np.abs(lo) ** d * (1.0 + rel) + _ETA)
    lo_val = np.where(lo >= 0.0,
                      _pad_down(np.maximum(lo**d * (1.0 - rel) - _ETA, 0.0)),
                      -lo_mag)
    hi_mag = _pad_down(np.maximum(np.abs(hi) ** d * (1.0 - rel) - _ETA, 0.0))
    hi_val = np.where(hi >= 0.0,
                      _pad_up(hi**d * (1.0 + rel) + _ETA),
                      -hi_mag)
    return lo_val, hi_val


def _exp_interval(lo, hi):
    rel = 4.0 * _EPS
    e_lo = np.maximum(_pad_down(np.exp(lo) * (1.0 - rel) - _ETA), 0.0)
    e_hi = _pad_up(np.exp(hi) * (1.0 + rel) + _ETA)
    return e_lo, e_hi


def kernel_bounds(kind, params, S, lo, hi):
    """Per-support-vector interval enclosures of the kernel value."""
    if kind == "poly":
        gamma, coef0, degree = params
        d_lo, d_hi = _dot_interval(S, lo, hi)
        if gamma >= 0.0:
            a_lo, a_hi = _pad_down(gamma * d_lo), _pad_up(gamma * d_hi)
        else:
            a_lo, a_hi = _pad_down(gamma * d_hi), _pad_up(gamma * d_lo)
        a_lo = _pad_down(a_lo + coef0)
        a_hi = _pad_up(a_hi + coef0)
        return _pow_interval(a_lo, a_hi, degree)
    if kind == "rbf":
        (gamma,) = params
        n = S.shape[1]
        d_lo = _pad_down(lo - S)
        d_hi = _pad_up(hi - S)
        sq_lo, sq_hi = _pow_interval(d_lo, d_hi, 2)
        s_lo = np.maximum(sq_lo.sum(axis=1) - _sum_err(sq_hi.sum(axis=1), n), 0.0)
        s_hi = sq_hi.sum(axis=1)
        s_hi = _pad_up(s_hi + _sum_err(s_hi, n))
        t_lo = _pad_down(-gamma * s_hi)
        t_hi = _pad_up(-gamma * s_lo)
        return _exp_interval(t_lo, t_hi)
    raise ValueError(f"unknown kernel kind {kind!r}")


def pair_interval(klo, khi, w, rho):
    """Weighted sum of per-SV kernel enclosures minus the bias."""
    from .. import rounding as rd

    t_lo = _pad_down(np.where(w >= 0.0, w * klo, w * khi))
    t_hi = _pad_up(np.where(w >= 0.0, w * khi, w * klo))
    n = len(w)
    mag = np.maximum(np.abs(t_lo), np.abs(t_hi)).sum() if n else 0.0
    k = _sum_err(mag, max(n, 1))
    lo = float(_pad_down(t_lo.sum() - k)) if n else 0.0
    hi = float(_pad_up(t_hi.sum() + k)) if n else 0.0
    return rd.sub_bounds(lo, rho)[0], rd.sub_bounds(hi, rho)[1]


# ---------------------------------------------------------------------------
# RAF domain
# ---------------------------------------------------------------------------

def _collinear_range(lam, elam, g0, nn, enn, nar, enar, s, es, gmin, mode):
    """Range of (lam*A + nn*ea)(g0*A + nar*eb) with A in [-s, s].

    ``gmin`` is the smallest vertex magnitude of A (equal to s when only
    the endpoints are admissible); exact mode also admits the interior
    quadratic vertex.  Arrays are per support vector.  Returns
    (rmin, rmax, err) with err a bound covering both input-error
    amplification and the fl arithmetic here.
    """
    corners_p = (nn, -nn)
    corners_q = (nar, -nar)
    cand_a = [s, -s, gmin, -gmin]
    c2 = lam * g0
    vals = []
    for p in corners_p:
        for q in corners_q:
            c1 = lam * q + g0 * p
            for a in cand_a:
                vals.append((c2 * a + c1) * a + p * q)
            if mode == "exact":
                with np.errstate(divide="ignore", invalid="ignore"):
                    t = np.where(c2 != 0.0, -c1 / (2.0 * np.where(c2 != 0.0, c2, 1.0)), np.inf)
                t_ok = np.abs(t) < s
                t = np.where(t_ok, t, 0.0)
                v = (c2 * t + c1) * t + p * q
                vals.append(np.where(t_ok, v, vals[-1]))
    rmin = vals[0]
    rmax = vals[0]
    for v in vals[1:]:
        rmin = np.minimum(rmin, v)
        rmax = np.maximum(rmax, v)
    # error budget: |d(range)| <= |dlam|(s)(B) + |dg0=0| + ... bound by
    # the product of factor magnitudes and their input errors.
    fa = np.abs(lam) * s + nn
    fb = np.abs(g0) * s + nar
    dfa = elam * s + np.abs(lam) * es + enn
    dfb = enar + np.abs(g0) * es
    err = ((dfa * (fb + dfb) + fa * dfb) + 8.0 * _EPS * (fa * fb)) * _INFL + _ETA
    return rmin, rmax, err


def _greedy_min_abs(u_abs):
    """Per-row greedily balanced |signed sum| of the magnitudes in
    ``u_abs`` (vertex-mode minimum candidate)."""
    srt = np.sort(u_abs, axis=1)[:, ::-1]
    acc = np.zeros(srt.shape[0])
    for col in range(srt.shape[1]):
        c = srt[:, col]
        acc = np.where(acc > 0.0, acc - c, acc + c)
    return np.abs(acc)


def linear_raf(w, rho, c, r, ar):
    # center = w.c - rho, coeffs = w*r, noise = |w|.ar + error budget
    from .. import rounding as rd

    n = len(w)
    wc = w * c
    center = float(wc.sum())
    e_center = float(_sum_err(np.abs(wc).sum(), n) + (_EPS * np.abs(wc)).sum() * _INFL)
    coeffs = w * r
    e_coeffs = _EPS * np.abs(coeffs) * _INFL + _ETA
    noise = float((np.abs(w) * ar).sum())
    e_noise = _sum_err(noise, n) + float((_EPS * np.abs(w) * ar).sum()) * _INFL
    lo_c, hi_c = rd.sub_bounds(center, rho)
    center_rep = lo_c if lo_c == hi_c else center - rho
    slack = max(abs(center_rep - lo_c), abs(hi_c - center_rep))
    total_noise = float(noise + e_noise + e_center + e_coeffs.sum() + slack) * _INFL
    return center_rep, coeffs, total_noise


def kernel_rafs(kind, params, S, c, r, ar, mode="exact"):
    """Per-SV abstract kernel values as factored RAF states.

    Returns (kc, ekc, mult, emult, knn, s_dir, es_dir) where the kernel
    RAF of SV i is  kc_i + mult_i * sum_j dir_ij eps_j + knn_i  with
    dir = S*r for poly and (c - S)*r for rbf, and s_dir = sum_j |dir_ij|.
    knn already includes every error bound except the ones attached to
    kc/mult (returned separately so the combiner can fold them in).
    """
    N, n = S.shape
    if kind == "poly":
        gamma, coef0, degree = params
        m = S @ c
        em = _sum_err(np.abs(S) @ np.abs(c), n) * _INFL
        u_abs = np.abs(S) * r
        s = u_abs.sum(axis=1)
        es = _sum_err(s, n) * _INFL
        dar = np.abs(S) @ ar
        edar = _sum_err(dar, n) * _INFL
        q = gamma * m + coef0
        eq = _e_add(q, _e_mul(gamma * m, gamma, 0.0, m, em), 0.0)
        nar = abs(gamma) * dar + abs(gamma) * edar * _INFL + _ETA
        gmin = _greedy_min_abs(u_abs) if mode == "vertex" else np.zeros(N)
        # iterated multiplication state: value = cc + lam*sum(u eps) + nn
        cc, ecc = q.copy(), eq.copy()
        lam = np.full(N, gamma)
        elam = np.zeros(N)
        nn = nar.copy()
        enn = np.zeros(N)
        base_lam = np.full(N, gamma)
        for _ in range(degree - 1):
            rmin, rmax, erange = _collinear_range(
                lam, elam, base_lam, nn, enn, nar, 0.0, s, es, gmin, mode)
            prod = cc * q
            eprod = _e_mul(prod, cc, ecc, q, eq)
            shift = 0.5 * (rmax + rmin)
            new_cc = prod + shift
            new_ecc = _e_add(new_cc, eprod, 0.5 * erange + _EPS * np.abs(shift))
            new_lam = cc * base_lam + q * lam
            new_elam = _e_add(new_lam,
                              _e_mul(cc * base_lam, cc, ecc, base_lam, 0.0),
                              _e_mul(q * lam, q, eq, lam, elam))
            half_spread = 0.5 * (rmax - rmin)
            new_nn = np.abs(cc) * nar + np.abs(q) * nn + half_spread
            new_enn = (ecc * nar + np.abs(cc) * 0.0 + eq * nn + np.abs(q) * enn
                       + 0.5 * erange + _EPS * new_nn * 4.0) * _INFL + _ETA
            cc, ecc, lam, elam, nn, enn = (
                new_cc, new_ecc, new_lam, new_elam, new_nn, new_enn)
        return cc, ecc, lam, elam, (nn + enn) * _INFL, s, es

    if kind == "rbf":
        (gamma,) = params
        d = c - S  # (N, n)
        ed = _EPS * np.abs(d) * _INFL + _ETA
        u_abs = np.abs(d) * r
        s = u_abs.sum(axis=1)
        es = (_sum_err(s, n) + (ed * r).sum(axis=1)
              + _EPS * u_abs.sum(axis=1)) * _INFL + _ETA
        # per-component squares: (d_j + r_j e_j + ar_j ea)^2
        if mode == "vertex":
            rmin_c, rmax_c, err_c = _collinear_range(
                np.ones_like(d), 0.0, np.ones_like(d),
                np.broadcast_to(ar, d.shape), 0.0,
                np.broadcast_to(ar, d.shape), 0.0,
                np.broadcast_to(r, d.shape), 0.0,
                np.broadcast_to(r, d.shape), mode)
        else:
            rmin_c, rmax_c, err_c = _collinear_range(
                np.ones_like(d), 0.0, np.ones_like(d),
                np.broadcast_to(ar, d.shape), 0.0,
                np.broadcast_to(ar, d.shape), 0.0,
                np.broadcast_to(r, d.shape), 0.0,
                np.zeros_like(d), mode)
        dsq = d * d
        edsq = _e_mul(dsq, d, ed, d, ed)
        ctr_c = dsq + 0.5 * (rmax_c + rmin_c)
        ectr_c = _e_add(ctr_c, edsq, 0.5 * err_c)
        nn_c = 2.0 * np.abs(d) * ar + 0.5 * (rmax_c - rmin_c)
        enn_c = (2.0 * ed * ar + 0.5 * err_c + _EPS * nn_c * 4.0) * _INFL + _ETA
        sq_center = ctr_c.sum(axis=1)
        esq_center = (_sum_err(np.abs(ctr_c).sum(axis=1), n)
                      + ectr_c.sum(axis=1)) * _INFL
        sq_nn = nn_c.sum(axis=1)
        esq_nn = (_sum_err(sq_nn, n) + enn_c.sum(axis=1)) * _INFL
        # t = -gamma * sqsum ;  coeffs become (-2 gamma) * d_ij r_j
        t_c = -gamma * sq_center
        et_c = _e_mul(t_c, -gamma, 0.0, sq_center, esq_center)
        t_nn = gamma * sq_nn
        et_nn = _e_mul(t_nn, gamma, 0.0, sq_nn, esq_nn)
        t_halfrad = gamma * (2.0 * s + sq_nn)  # gamma*(sum|2 d r| + noise)
        et_halfrad = (gamma * (2.0 * es + esq_nn)
                      + _EPS * t_halfrad * 4.0) * _INFL + _ETA
        lo = t_c - t_halfrad - (et_c + et_halfrad)
        hi = t_c + t_halfrad + (et_c + et_halfrad)
        lo = _pad_down(lo)
        hi = _pad_up(hi)
        kc, ekc, alpha, ealpha, band = _chebyshev_exp(lo, hi, t_c, et_c)
        beta = -2.0 * gamma * alpha
        ebeta = 2.0 * gamma * ealpha * _INFL + _EPS * np.abs(beta) * _INFL + _ETA
        knn = (alpha + ealpha) * (t_nn + et_nn) + band
        knn = knn * _INFL + _ETA
        return kc, ekc, beta, ebeta, knn, s, es
    raise ValueError(f"unknown kernel kind {kind!r}")


def _chebyshev_exp(lo, hi, t_c, et_c):
    """Vectorised minimax-linear exponential over [lo, hi] per SV.

    Returns (kc, ekc, alpha, ealpha, band) where the enclosure is
    kc + alpha * (linear part of the argument) +/- band and kc is
    alpha*t_c + zeta.  Degenerate widths fall back to the constant
    midpoint enclosure (alpha = 0).
    """
    rel = 4.0 * _EPS
    el = np.exp(lo)
    eu = np.exp(hi)
    e_el = el * rel + _ETA
    e_eu = eu * rel + _ETA
    width = hi - lo
    degenerate = width < 1e-12
    wsafe = np.where(degenerate, 1.0, width)
    alpha = (eu - el) / wsafe
    ealpha = ((e_eu + e_el) / wsafe
              + 8.0 * _EPS * np.abs(alpha) + _ETA) * _INFL
    alpha = np.where(degenerate, 0.0, np.maximum(alpha, 0.0))
    ealpha = np.where(degenerate, 0.0, ealpha)
    safe_alpha = np.where(alpha > 0.0, alpha, 1.0)
    ln_a = np.log(safe_alpha)
    e_ln = (ealpha / np.maximum(safe_alpha - ealpha, 1e-300)
            + 4.0 * _EPS * np.abs(ln_a) + _ETA) * _INFL
    # g = e^l - alpha*(l+1) + alpha*ln(alpha)
    g = el - alpha * (lo + 1.0) + alpha * ln_a
    eg = (e_el + ealpha * np.abs(lo + 1.0) + _EPS * np.abs(alpha * (lo + 1.0))
          + ealpha * np.abs(ln_a) + np.abs(alpha) * e_ln
          + 8.0 * _EPS * (np.abs(g) + 1e-30)) * _INFL + _ETA
    g = np.maximum(g, 0.0)
    zeta = el - alpha * lo - 0.5 * g
    ezeta = (e_el + ealpha * np.abs(lo) + _EPS * np.abs(alpha * lo)
             + 0.5 * eg + 4.0 * _EPS * np.abs(zeta)) * _INFL + _ETA
    m = np.maximum(np.abs(lo), np.abs(hi))
    band = (0.5 * (g + eg) + ealpha * m + ezeta) * _INFL + _ETA
    kc = alpha * t_c + zeta
    ekc = (_e_add(kc, _e_mul(alpha * t_c, alpha, ealpha, t_c, et_c), ezeta)) * _INFL
    # degenerate rows: constant enclosure at the midpoint of [e^l, e^u]
    mid = 0.5 * (el + eu)
    halfw = 0.5 * (eu - el) + e_el + e_eu + _EPS * mid * 4.0 + _ETA
    kc = np.where(degenerate, mid, kc)
    ekc = np.where(degenerate, _EPS * mid * _INFL + _ETA, ekc)
    band = np.where(degenerate, halfw * _INFL, band)
    return kc, ekc, alpha, ealpha, band


def pair_raf(kind, state, w, rho, S, c, r):
    """Weighted combination of per-SV kernel RAF states into the final
    decision RAF (center, coeffs, noise), bias already subtracted."""
    from .. import rounding as rd

    kc, ekc, mult, emult, knn, s_dir, es_dir = state
    N, n = S.shape
    wkc = w * kc
    center = float(wkc.sum())
    e_center = float((_sum_err(np.abs(wkc).sum(), max(N, 1))
                      + (np.abs(w) * ekc).sum()
                      + (_EPS * np.abs(wkc)).sum()) * _INFL + _ETA)
    v = w * mult
    ev = np.abs(w) * emult + _EPS * np.abs(v) * _INFL + _ETA
    if kind == "poly":
        g = v @ S
        eg = (_sum_err(np.abs(v) @ np.abs(S), max(N, 1))
              + ev @ np.abs(S)) * _INFL + _ETA
        coeffs = r * g
    else:  # rbf: coeff_j = r_j * (c_j * sum(v) - (v @ S)_j)
        vs = float(v.sum())
        evs = float(_sum_err(np.abs(v).sum(), max(N, 1)) + ev.sum()) * _INFL
        g_mat = v @ S
        eg_mat = (_sum_err(np.abs(v) @ np.abs(S), max(N, 1))
                  + ev @ np.abs(S)) * _INFL + _ETA
        g = c * vs - g_mat
        eg = (np.abs(c) * evs + eg_mat
              + _EPS * (np.abs(c * vs) + np.abs(g))) * _INFL + _ETA
        coeffs = r * g
    e_coeffs = (r * eg + _EPS * np.abs(coeffs)) * _INFL + _ETA
    # relational multiplier error: |d mult| * sum_j |dir_ij|
    e_mult_noise = float((np.abs(w) * (emult * (s_dir + es_dir))).sum()) * _INFL
    noise_terms = float((np.abs(w) * knn).sum())
    e_noise = float(_sum_err((np.abs(w) * knn).sum(), max(N, 1))
                    + (_EPS * np.abs(w) * knn).sum()) * _INFL
    lo_c, hi_c = rd.sub_bounds(center, rho)
    center_rep = center - rho
    slack = max(abs(center_rep - lo_c), abs(hi_c - center_rep), 0.0)
    noise = ((noise_terms + e_noise + e_center + e_mult_noise
              + float(e_coeffs.sum()) + slack) * _INFL + _ETA)
    return center_rep, coeffs, float(noise)


def raf_enclosure(center, coeffs, noise):
    """Interval [center - rad, center + rad] with rad rounded up."""
    rad = float(np.abs(coeffs).sum())
    rad = rad + _sum_err(rad, max(len(coeffs), 1)) + noise
    rad = rad * _INFL
    return _pad_down(center - rad), _pad_up(center + rad)
