# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: directed-rounding abstract evaluation in C.

Same contract and signatures as svmcert._core.pure.  All enclosure
arithmetic runs with the C floating-point environment set to
round-toward-negative; upper bounds use the negation identity
up(x op y) = -down((-x) op y), which costs one exact sign flip instead
of a rounding-mode switch.  Transcendentals are evaluated round-to-
nearest and nudged outward two ulps (the documented libm error
allowance).  Entry points restore the caller's rounding mode before
returning; the FP environment is thread-local, so concurrent
verification tasks are safe.

Must be compiled with -frounding-math so the compiler neither folds nor
reorders FP arithmetic across mode changes.
"""

import numpy as np

from libc.math cimport fabs, exp as c_exp, log as c_log, nextafter

cdef extern from "fenv.h" nogil:
    int fesetround(int)
    int fegetround()
    int FE_DOWNWARD
    int FE_TONEAREST

BACKEND_NAME = "compiled"

cdef double INF = float("inf")
cdef double MAXF = 1.7976931348623157e308
cdef double EPS = 2.220446049250313e-16


# --- directed scalar helpers; every caller is in FE_DOWNWARD mode ---------

cdef inline double umul(double a, double b) nogil:
    return -((-a) * b)


cdef inline double uadd(double a, double b) nogil:
    return -((-a) + (-b))


cdef inline double usub(double a, double b) nogil:
    return -(b + (-a))


cdef inline double udiv(double a, double b) nogil:
    return -((-a) / b)


cdef inline double dpow_mag(double m, int d) nogil:
    cdef double p = m
    cdef int k
    for k in range(d - 1):
        p = p * m
    return p


cdef inline double upow_mag(double m, int d) nogil:
    cdef double p = m
    cdef int k
    for k in range(d - 1):
        p = umul(p, m)
    return p


cdef inline void exp_bounds(double x, double* lo, double* hi) nogil:
    cdef double v
    if x == 0.0:
        lo[0] = 1.0
        hi[0] = 1.0
        return
    fesetround(FE_TONEAREST)
    v = c_exp(x)
    fesetround(FE_DOWNWARD)
    if v == INF:
        lo[0] = MAXF
        hi[0] = INF
        return
    lo[0] = nextafter(nextafter(v, -INF), -INF)
    if lo[0] < 0.0:
        lo[0] = 0.0
    hi[0] = nextafter(nextafter(v, INF), INF)


cdef inline double ln_down(double x) nogil:
    cdef double v
    if x == 1.0:
        return 0.0
    fesetround(FE_TONEAREST)
    v = c_log(x)
    fesetround(FE_DOWNWARD)
    return nextafter(nextafter(v, -INF), -INF)


cdef inline double ln_up(double x) nogil:
    cdef double v
    if x == 1.0:
        return 0.0
    fesetround(FE_TONEAREST)
    v = c_log(x)
    fesetround(FE_DOWNWARD)
    return nextafter(nextafter(v, INF), INF)


cdef inline double imid(double lo, double hi) nogil:
    cdef double m = lo + 0.5 * (hi - lo)
    if m < lo: m = lo
    if m > hi: m = hi
    return m


cdef inline double islack(double lo, double hi, double rep) nogil:
    cdef double d1 = usub(hi, rep)
    cdef double d2 = usub(rep, lo)
    return d1 if d1 > d2 else d2


cdef inline void imul_iv(double alo, double ahi, double blo, double bhi,
                         double* lo, double* hi) nogil:
    cdef double m1 = alo * blo
    cdef double m2 = alo * bhi
    cdef double m3 = ahi * blo
    cdef double m4 = ahi * bhi
    cdef double m = m1
    if m2 < m: m = m2
    if m3 < m: m = m3
    if m4 < m: m = m4
    lo[0] = m
    m1 = umul(alo, blo)
    m2 = umul(alo, bhi)
    m3 = umul(ahi, blo)
    m4 = umul(ahi, bhi)
    m = m1
    if m2 > m: m = m2
    if m3 > m: m = m3
    if m4 > m: m = m4
    hi[0] = m


cdef inline void iscale_iv(double z, double alo, double ahi,
                           double* lo, double* hi) nogil:
    if z >= 0.0:
        lo[0] = z * alo
        hi[0] = umul(z, ahi)
    else:
        lo[0] = z * ahi
        hi[0] = umul(z, alo)


cdef inline double imax_abs(double lo, double hi) nogil:
    return fabs(lo) if fabs(lo) > fabs(hi) else fabs(hi)


cdef inline double imin_abs(double lo, double hi) nogil:
    if lo <= 0.0 <= hi:
        return 0.0
    return fabs(lo) if fabs(lo) < fabs(hi) else fabs(hi)


# ---------------------------------------------------------------------------
# Interval domain
# ---------------------------------------------------------------------------

def linear_interval(const double[::1] w, double rho, const double[::1] lo, const double[::1] hi):
    cdef Py_ssize_t j, n = w.shape[0]
    cdef double acc_lo = 0.0, acc_hi = 0.0
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for j in range(n):
        if w[j] >= 0.0:
            acc_lo = acc_lo + w[j] * lo[j]
            acc_hi = uadd(acc_hi, umul(w[j], hi[j]))
        else:
            acc_lo = acc_lo + w[j] * hi[j]
            acc_hi = uadd(acc_hi, umul(w[j], lo[j]))
    acc_lo = acc_lo + (-rho)
    acc_hi = usub(acc_hi, rho)
    fesetround(old)
    return acc_lo, acc_hi


def kernel_bounds(kind, params, const double[:, ::1] S, const double[::1] lo, const double[::1] hi):
    cdef Py_ssize_t N = S.shape[0], n = S.shape[1], i, j
    klo_arr = np.empty(N)
    khi_arr = np.empty(N)
    cdef double[::1] klo = klo_arr
    cdef double[::1] khi = khi_arr
    cdef double gamma, coef0 = 0.0
    cdef int degree = 2
    cdef double d_lo, d_hi, a_lo, a_hi, mlo, mhi, s_lo, s_hi, t
    cdef double e_lo, e_hi
    cdef bint is_poly = kind == "poly"
    if not is_poly and kind != "rbf":
        raise ValueError(f"unknown kernel kind {kind!r}")
    if is_poly:
        gamma = params[0]
        coef0 = params[1]
        degree = params[2]
    else:
        gamma = params[0]
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for i in range(N):
        if is_poly:
            d_lo = 0.0
            d_hi = 0.0
            for j in range(n):
                if S[i, j] >= 0.0:
                    d_lo = d_lo + S[i, j] * lo[j]
                    d_hi = uadd(d_hi, umul(S[i, j], hi[j]))
                else:
                    d_lo = d_lo + S[i, j] * hi[j]
                    d_hi = uadd(d_hi, umul(S[i, j], lo[j]))
            iscale_iv(gamma, d_lo, d_hi, &a_lo, &a_hi)
            a_lo = a_lo + coef0
            a_hi = uadd(a_hi, coef0)
            if degree % 2 == 0:
                mhi = imax_abs(a_lo, a_hi)
                mlo = imin_abs(a_lo, a_hi)
                klo[i] = dpow_mag(mlo, degree)
                khi[i] = upow_mag(mhi, degree)
            else:
                klo[i] = dpow_mag(a_lo, degree) if a_lo >= 0.0 \
                    else -upow_mag(-a_lo, degree)
                khi[i] = upow_mag(a_hi, degree) if a_hi >= 0.0 \
                    else -dpow_mag(-a_hi, degree)
        else:
            s_lo = 0.0
            s_hi = 0.0
            for j in range(n):
                d_lo = lo[j] - S[i, j]
                d_hi = usub(hi[j], S[i, j])
                mlo = imin_abs(d_lo, d_hi)
                mhi = imax_abs(d_lo, d_hi)
                s_lo = s_lo + mlo * mlo
                s_hi = uadd(s_hi, umul(mhi, mhi))
            t = -umul(gamma, s_hi)          # lower end of -gamma*s
            exp_bounds(t, &e_lo, &e_hi)
            klo[i] = e_lo
            t = -(gamma * s_lo)             # upper end of -gamma*s
            exp_bounds(t, &e_lo, &e_hi)
            khi[i] = e_hi
    fesetround(old)
    return klo_arr, khi_arr


def pair_interval(const double[::1] klo, const double[::1] khi, const double[::1] w, double rho):
    cdef Py_ssize_t i, N = w.shape[0]
    cdef double acc_lo = 0.0, acc_hi = 0.0
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for i in range(N):
        if w[i] == 0.0:
            continue
        if w[i] >= 0.0:
            acc_lo = acc_lo + w[i] * klo[i]
            acc_hi = uadd(acc_hi, umul(w[i], khi[i]))
        else:
            acc_lo = acc_lo + w[i] * khi[i]
            acc_hi = uadd(acc_hi, umul(w[i], klo[i]))
    acc_lo = acc_lo + (-rho)
    acc_hi = usub(acc_hi, rho)
    fesetround(old)
    return acc_lo, acc_hi


# ---------------------------------------------------------------------------
# RAF domain
# ---------------------------------------------------------------------------

cdef inline void square1_range(double r, double ar, bint vertex,
                               double* rmin, double* rmax) nogil:
    """Range of (r*e + p)(r*e + q) for e in [-1,1], |p|,|q| <= ar with
    p, q independent: the single-coefficient square used per image
    component by the rbf kernel.  Exact mode reaches the interior
    minimum -ar^2 (at e=0, p=-q) and 0 for pure squares; vertex mode
    keeps e at +-1."""
    cdef double t1, t2
    rmax[0] = umul(uadd(r, ar), uadd(r, ar))
    if vertex:
        # candidates (r + p)(r + q) at the e = +-1 vertices
        t1 = (r - ar) * (r - ar)
        t2 = (r + ar) * (r - ar)
        rmin[0] = t2 if t2 < t1 else t1
    else:
        rmin[0] = -umul(ar, ar)
        if ar == 0.0:
            rmin[0] = 0.0


cdef void collinear_range(double lam_lo, double lam_hi, double g0,
                          double nn_hi, double nar_hi,
                          double s_lo, double s_hi, double gmin,
                          bint vertex,
                          double* rmin, double* rmax) nogil:
    """Sound range of (lam*A + p)(g0*A + q) for A in [-s, s], |p| <= nn,
    |q| <= nar; lam and s are enclosures, g0/nn/nar exact scalars.
    Vertex mode restricts A to {+-s, +-gmin}; exact mode adds the
    interior quadratic vertex (its inclusion can only widen)."""
    cdef double best_lo = INF
    cdef double best_hi = -INF
    cdef double a_lo[4]
    cdef double a_hi[4]
    cdef int na = 2, ci, sp, sq
    cdef double p, q, fa_lo, fa_hi, fb_lo, fb_hi, v_lo, v_hi
    cdef double c2_lo, c2_hi, c1_lo, c1_hi, t_lo, t_hi
    cdef double num_lo, num_hi, den, pq_lo, pq_hi, bound, mag_c1, mag_c2
    a_lo[0] = s_lo; a_hi[0] = s_hi
    a_lo[1] = -s_hi; a_hi[1] = -s_lo
    if vertex:
        a_lo[2] = gmin; a_hi[2] = gmin
        a_lo[3] = -gmin; a_hi[3] = -gmin
        na = 4
    for sp in range(2):
        p = nn_hi if sp else -nn_hi
        for sq in range(2):
            q = nar_hi if sq else -nar_hi
            for ci in range(na):
                imul_iv(lam_lo, lam_hi, a_lo[ci], a_hi[ci], &fa_lo, &fa_hi)
                fa_lo = fa_lo + p
                fa_hi = uadd(fa_hi, p)
                iscale_iv(g0, a_lo[ci], a_hi[ci], &fb_lo, &fb_hi)
                fb_lo = fb_lo + q
                fb_hi = uadd(fb_hi, q)
                imul_iv(fa_lo, fa_hi, fb_lo, fb_hi, &v_lo, &v_hi)
                if v_lo < best_lo: best_lo = v_lo
                if v_hi > best_hi: best_hi = v_hi
            if not vertex:
                # interior vertex value V = p*q - c1^2/(4 c2) with
                # c1 = lam*q + g0*p, c2 = lam*g0
                iscale_iv(g0, lam_lo, lam_hi, &c2_lo, &c2_hi)
                iscale_iv(q, lam_lo, lam_hi, &c1_lo, &c1_hi)
                t_lo = g0 * p
                t_hi = umul(g0, p)
                if t_hi < t_lo:
                    t_lo, t_hi = t_hi, t_lo
                c1_lo = c1_lo + t_lo
                c1_hi = uadd(c1_hi, t_hi)
                pq_lo = p * q
                pq_hi = umul(p, q)
                if pq_hi < pq_lo:
                    pq_lo, pq_hi = pq_hi, pq_lo
                imul_iv(c1_lo, c1_hi, c1_lo, c1_hi, &num_lo, &num_hi)
                if num_lo < 0.0: num_lo = 0.0
                if c2_lo > 0.0:
                    den = 4.0 * c2_lo
                    v_lo = pq_lo + (-udiv(num_hi, den))
                    den = umul(4.0, c2_hi)
                    v_hi = uadd(pq_hi, -(num_lo / den))
                    if v_lo < best_lo: best_lo = v_lo
                    if v_hi > best_hi: best_hi = v_hi
                elif c2_hi < 0.0:
                    den = umul(4.0, -c2_lo)
                    v_lo = pq_lo + (num_lo / den)
                    den = 4.0 * (-c2_hi)
                    v_hi = uadd(pq_hi, udiv(num_hi, den))
                    if v_lo < best_lo: best_lo = v_lo
                    if v_hi > best_hi: best_hi = v_hi
                elif c2_lo != 0.0 or c2_hi != 0.0:
                    mag_c2 = imax_abs(c2_lo, c2_hi)
                    mag_c1 = imax_abs(c1_lo, c1_hi)
                    bound = uadd(uadd(umul(mag_c2, umul(s_hi, s_hi)),
                                      umul(mag_c1, s_hi)),
                                 umul(fabs(p), fabs(q)))
                    if -bound < best_lo: best_lo = -bound
                    if bound > best_hi: best_hi = bound
    rmin[0] = best_lo
    rmax[0] = best_hi


def linear_raf(const double[::1] w, double rho, const double[::1] c, const double[::1] r,
               const double[::1] ar):
    cdef Py_ssize_t j, n = w.shape[0]
    coeffs_arr = np.empty(n)
    cdef double[::1] coeffs = coeffs_arr
    cdef double ctr_lo = 0.0, ctr_hi = 0.0, noise_hi = 0.0
    cdef double t_lo, t_hi, rep
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for j in range(n):
        ctr_lo = ctr_lo + w[j] * c[j]
        ctr_hi = uadd(ctr_hi, umul(w[j], c[j]))
        t_lo = w[j] * r[j]
        t_hi = umul(w[j], r[j])
        if t_hi < t_lo:
            t_lo, t_hi = t_hi, t_lo
        rep = imid(t_lo, t_hi)
        coeffs[j] = rep
        noise_hi = uadd(noise_hi, islack(t_lo, t_hi, rep))
        noise_hi = uadd(noise_hi, umul(fabs(w[j]), ar[j]))
    ctr_lo = ctr_lo + (-rho)
    ctr_hi = usub(ctr_hi, rho)
    rep = imid(ctr_lo, ctr_hi)
    noise_hi = uadd(noise_hi, islack(ctr_lo, ctr_hi, rep))
    fesetround(old)
    return rep, coeffs_arr, noise_hi


def kernel_rafs(kind, params, const double[:, ::1] S, const double[::1] c, const double[::1] r,
                const double[::1] ar, mode="exact"):
    """Per-SV kernel RAF states (kc, ekc, mult, emult, knn, s_dir, es_dir);
    see the pure backend for the factored representation."""
    cdef Py_ssize_t N = S.shape[0], n = S.shape[1], i, j
    cdef bint vertex = mode == "vertex"
    kc_arr = np.empty(N); ekc_arr = np.empty(N)
    mult_arr = np.empty(N); emult_arr = np.empty(N)
    knn_arr = np.empty(N)
    s_arr = np.empty(N); es_arr = np.empty(N)
    cdef double[::1] kc = kc_arr, ekc = ekc_arr, mult = mult_arr
    cdef double[::1] emult = emult_arr, knn = knn_arr
    cdef double[::1] s_out = s_arr, es_out = es_arr
    cdef double gamma, coef0
    cdef int degree, d_it
    cdef double m_lo, m_hi, s_lo, s_hi, dar_hi, q_lo, q_hi, nar_hi
    cdef double cc_lo, cc_hi, lam_lo, lam_hi, nn_hi
    cdef double rmin, rmax, sh_lo, sh_hi, t_lo, t_hi, u_lo, u_hi, z_lo, z_hi
    cdef double gmin, rep, acc, t1, t2, beta
    cdef double d_lo, d_hi, mlo, mhi
    cdef double el_lo, el_hi, eu_lo, eu_hi, al_lo, al_hi
    cdef double ln_lo, ln_hi, g_lo, g_hi, band, width
    cdef double arg_lo, arg_hi, rad_hi
    cdef double[:, ::1] gsrt
    cdef int old = fegetround()

    if kind == "poly":
        gamma = params[0]
        coef0 = params[1]
        degree = params[2]
        if vertex:
            srt = np.sort(np.abs(np.asarray(S)) * np.asarray(r), axis=1)
            gsrt = srt[:, ::-1].copy()
        else:
            gsrt = np.zeros((1, 1))
        fesetround(FE_DOWNWARD)
        for i in range(N):
            m_lo = 0.0; m_hi = 0.0
            s_lo = 0.0; s_hi = 0.0
            dar_hi = 0.0
            for j in range(n):
                m_lo = m_lo + S[i, j] * c[j]
                m_hi = uadd(m_hi, umul(S[i, j], c[j]))
                s_lo = s_lo + fabs(S[i, j]) * r[j]
                s_hi = uadd(s_hi, umul(fabs(S[i, j]), r[j]))
                dar_hi = uadd(dar_hi, umul(fabs(S[i, j]), ar[j]))
            iscale_iv(gamma, m_lo, m_hi, &q_lo, &q_hi)
            q_lo = q_lo + coef0
            q_hi = uadd(q_hi, coef0)
            nar_hi = umul(fabs(gamma), dar_hi)
            gmin = 0.0
            if vertex:
                acc = 0.0
                for j in range(n):
                    acc = acc - gsrt[i, j] if acc > 0.0 else acc + gsrt[i, j]
                gmin = fabs(acc)
            cc_lo = q_lo; cc_hi = q_hi
            lam_lo = gamma; lam_hi = gamma
            nn_hi = nar_hi
            for d_it in range(degree - 1):
                collinear_range(lam_lo, lam_hi, gamma, nn_hi, nar_hi,
                                s_lo, s_hi, gmin, vertex, &rmin, &rmax)
                imul_iv(cc_lo, cc_hi, q_lo, q_hi, &t_lo, &t_hi)
                sh_lo = 0.5 * (rmin + rmax)
                sh_hi = 0.5 * uadd(rmin, rmax)
                if sh_hi < sh_lo:
                    sh_lo, sh_hi = sh_hi, sh_lo
                u_lo = t_lo + sh_lo
                u_hi = uadd(t_hi, sh_hi)
                iscale_iv(gamma, cc_lo, cc_hi, &t_lo, &t_hi)
                imul_iv(q_lo, q_hi, lam_lo, lam_hi, &z_lo, &z_hi)
                lam_lo = t_lo + z_lo
                lam_hi = uadd(t_hi, z_hi)
                t1 = imax_abs(cc_lo, cc_hi)
                t2 = imax_abs(q_lo, q_hi)
                nn_hi = uadd(uadd(umul(t1, nar_hi), umul(t2, nn_hi)),
                             umul(0.5, usub(rmax, rmin)))
                cc_lo = u_lo; cc_hi = u_hi
            rep = imid(cc_lo, cc_hi)
            kc[i] = rep
            ekc[i] = islack(cc_lo, cc_hi, rep)
            rep = imid(lam_lo, lam_hi)
            mult[i] = rep
            emult[i] = islack(lam_lo, lam_hi, rep)
            knn[i] = nn_hi
            rep = imid(s_lo, s_hi)
            s_out[i] = rep
            es_out[i] = islack(s_lo, s_hi, rep)
        fesetround(old)
        return kc_arr, ekc_arr, mult_arr, emult_arr, knn_arr, s_arr, es_arr

    if kind != "rbf":
        raise ValueError(f"unknown kernel kind {kind!r}")
    gamma = params[0]
    fesetround(FE_DOWNWARD)
    for i in range(N):
        cc_lo = 0.0; cc_hi = 0.0        # squared-distance center interval
        s_lo = 0.0; s_hi = 0.0          # direction mass sum |d_ij| r_j
        nn_hi = 0.0                     # squared-distance noise
        for j in range(n):
            d_lo = c[j] - S[i, j]
            d_hi = usub(c[j], S[i, j])
            square1_range(r[j], ar[j], vertex, &rmin, &rmax)
            imul_iv(d_lo, d_hi, d_lo, d_hi, &t_lo, &t_hi)
            if t_lo < 0.0:
                t_lo = 0.0
            cc_lo = cc_lo + (t_lo + 0.5 * (rmin + rmax))
            cc_hi = uadd(cc_hi, uadd(t_hi, 0.5 * uadd(rmin, rmax)))
            mhi = imax_abs(d_lo, d_hi)
            nn_hi = uadd(nn_hi, uadd(umul(2.0 * mhi, ar[j]),
                                     umul(0.5, usub(rmax, rmin))))
            s_lo = s_lo + imin_abs(d_lo, d_hi) * r[j]
            s_hi = uadd(s_hi, umul(mhi, r[j]))
        # argument RAF t = -gamma * sq: center interval, noise, range
        iscale_iv(-gamma, cc_lo, cc_hi, &t_lo, &t_hi)
        nn_hi = umul(gamma, nn_hi)
        rad_hi = uadd(umul(umul(2.0, gamma), s_hi), nn_hi)
        arg_lo = t_lo + (-rad_hi)
        arg_hi = uadd(t_hi, rad_hi)
        width = usub(arg_hi, arg_lo)
        exp_bounds(arg_lo, &el_lo, &el_hi)
        exp_bounds(arg_hi, &eu_lo, &eu_hi)
        al_lo = 0.0
        if width >= 1e-12:
            al_lo = (eu_lo + (-el_hi)) / width
            al_hi = udiv(usub(eu_hi, el_lo), arg_hi - arg_lo)
            if al_lo < 0.0:
                al_lo = 0.0
        if width < 1e-12 or al_lo <= 0.0:
            # constant midpoint enclosure
            rep = imid(el_lo, eu_hi)
            kc[i] = rep
            ekc[i] = 0.0
            mult[i] = 0.0
            emult[i] = 0.0
            knn[i] = islack(el_lo, eu_hi, rep)
            rep = imid(s_lo, s_hi)
            s_out[i] = rep
            es_out[i] = islack(s_lo, s_hi, rep)
            continue
        # gap g = e^l - alpha*(l+1) + alpha*ln(alpha)  (l = arg_lo exact)
        ln_lo = ln_down(al_lo)
        ln_hi = ln_up(al_hi)
        z_lo = arg_lo + 1.0
        z_hi = uadd(arg_lo, 1.0)
        imul_iv(al_lo, al_hi, z_lo, z_hi, &t_lo, &t_hi)
        imul_iv(al_lo, al_hi, ln_lo, ln_hi, &u_lo, &u_hi)
        g_lo = (el_lo + (-t_hi)) + u_lo
        g_hi = uadd(usub(el_hi, t_lo), u_hi)
        if g_hi < 0.0: g_hi = 0.0
        if g_lo < 0.0: g_lo = 0.0
        if g_lo > g_hi: g_lo = g_hi
        # zeta = e^l - alpha*l - g/2
        iscale_iv(arg_lo, al_lo, al_hi, &t_lo, &t_hi)
        z_lo = (el_lo + (-t_hi)) + (-(0.5 * g_hi))
        z_hi = uadd(usub(el_hi, t_lo), -(0.5 * g_lo))
        rep = imid(z_lo, z_hi)
        band = uadd(umul(0.5, g_hi), islack(z_lo, z_hi, rep))
        t1 = imid(al_lo, al_hi)               # alpha representative
        t2 = islack(al_lo, al_hi, t1)         # alpha slack
        band = uadd(band, umul(t2, imax_abs(arg_lo, arg_hi)))
        # kernel center: alpha_rep * t_center + zeta_rep
        iscale_iv(-gamma, cc_lo, cc_hi, &u_lo, &u_hi)
        iscale_iv(t1, u_lo, u_hi, &u_lo, &u_hi)
        u_lo = u_lo + rep
        u_hi = uadd(u_hi, rep)
        rep = imid(u_lo, u_hi)
        kc[i] = rep
        ekc[i] = islack(u_lo, u_hi, rep)
        beta = -2.0 * gamma * t1
        mult[i] = beta
        emult[i] = uadd(umul(umul(2.0, gamma), t2), 4.0 * EPS * fabs(beta))
        knn[i] = uadd(umul(uadd(t1, t2), nn_hi), band)
        rep = imid(s_lo, s_hi)
        s_out[i] = rep
        es_out[i] = islack(s_lo, s_hi, rep)
    fesetround(old)
    return kc_arr, ekc_arr, mult_arr, emult_arr, knn_arr, s_arr, es_arr


def pair_raf(kind, state, const double[::1] w, double rho, const double[:, ::1] S,
             const double[::1] c, const double[::1] r):
    kc, ekc, mult, emult, knn, s_dir, es_dir = state
    cdef const double[::1] kc_v = kc, ekc_v = ekc, mult_v = mult
    cdef const double[::1] emult_v = emult, knn_v = knn
    cdef const double[::1] sd_v = s_dir, esd_v = es_dir
    cdef Py_ssize_t N = S.shape[0], n = S.shape[1], i, j
    coeffs_arr = np.empty(n)
    cdef double[::1] coeffs = coeffs_arr
    v_lo_arr = np.empty(N)
    v_hi_arr = np.empty(N)
    cdef double[::1] v_lo = v_lo_arr, v_hi = v_hi_arr
    cdef double ctr_lo = 0.0, ctr_hi = 0.0, noise_hi = 0.0
    cdef double t_lo, t_hi, g_lo, g_hi, rep, vs_lo = 0.0, vs_hi = 0.0
    cdef double w_lo, w_hi
    cdef bint rbf = kind == "rbf"
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for i in range(N):
        if w[i] == 0.0:
            v_lo[i] = 0.0
            v_hi[i] = 0.0
            continue
        t_lo = mult_v[i] + (-emult_v[i])
        t_hi = uadd(mult_v[i], emult_v[i])
        iscale_iv(w[i], t_lo, t_hi, &w_lo, &w_hi)
        v_lo[i] = w_lo
        v_hi[i] = w_hi
        t_lo = kc_v[i] + (-ekc_v[i])
        t_hi = uadd(kc_v[i], ekc_v[i])
        iscale_iv(w[i], t_lo, t_hi, &g_lo, &g_hi)
        ctr_lo = ctr_lo + g_lo
        ctr_hi = uadd(ctr_hi, g_hi)
        noise_hi = uadd(noise_hi, umul(fabs(w[i]), knn_v[i]))
        noise_hi = uadd(noise_hi,
                        umul(umul(fabs(w[i]), emult_v[i]),
                             uadd(sd_v[i], esd_v[i])))
    if rbf:
        for i in range(N):
            vs_lo = vs_lo + v_lo[i]
            vs_hi = uadd(vs_hi, v_hi[i])
    # row-major matvec; support vectors outside the pair have v == 0
    g_lo_arr = np.zeros(n)
    g_hi_arr = np.zeros(n)
    cdef double[::1] gj_lo = g_lo_arr, gj_hi = g_hi_arr
    for i in range(N):
        if v_lo[i] == 0.0 and v_hi[i] == 0.0:
            continue
        for j in range(n):
            if S[i, j] >= 0.0:
                gj_lo[j] = gj_lo[j] + v_lo[i] * S[i, j]
                gj_hi[j] = uadd(gj_hi[j], umul(v_hi[i], S[i, j]))
            else:
                gj_lo[j] = gj_lo[j] + v_hi[i] * S[i, j]
                gj_hi[j] = uadd(gj_hi[j], umul(v_lo[i], S[i, j]))
    for j in range(n):
        g_lo = gj_lo[j]
        g_hi = gj_hi[j]
        if rbf:
            # coeff_j = r_j * (c_j * sum(v) - g_j)
            iscale_iv(c[j], vs_lo, vs_hi, &t_lo, &t_hi)
            t_lo, t_hi = t_lo + (-g_hi), uadd(t_hi, -g_lo)
            g_lo, g_hi = t_lo, t_hi
        t_lo = r[j] * g_lo
        t_hi = umul(r[j], g_hi)
        rep = imid(t_lo, t_hi)
        coeffs[j] = rep
        noise_hi = uadd(noise_hi, islack(t_lo, t_hi, rep))
    ctr_lo = ctr_lo + (-rho)
    ctr_hi = usub(ctr_hi, rho)
    rep = imid(ctr_lo, ctr_hi)
    noise_hi = uadd(noise_hi, islack(ctr_lo, ctr_hi, rep))
    fesetround(old)
    return rep, coeffs_arr, noise_hi


def raf_enclosure(double center, const double[::1] coeffs, double noise):
    cdef Py_ssize_t j, n = coeffs.shape[0]
    cdef double rad = noise
    cdef double lo, hi
    cdef int old = fegetround()
    fesetround(FE_DOWNWARD)
    for j in range(n):
        rad = uadd(rad, fabs(coeffs[j]))
    lo = center + (-rad)
    hi = uadd(center, rad)
    fesetround(old)
    return lo, hi
