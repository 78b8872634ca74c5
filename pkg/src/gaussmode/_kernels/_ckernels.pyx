# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: PPT eigenvalue pipeline, limit-temperature bisection and
the gaussian-measurement grid scan.  ``_pykernels`` mirrors every function."""
from libc.math cimport sqrt, expm1, fabs, cos, sin

import numpy as np


cdef inline double _bose(double lam, double t) nogil:
    cdef double x
    if t == 0.0:
        return 0.0
    x = lam / t
    if x > 700.0:
        return 0.0
    if x < 1e-8:
        return 1.0 / x - 0.5
    return 1.0 / expm1(x)


def bose(double lam, double t):
    return _bose(lam, t)


cdef double _ftilde_minus(double kpx, double kpy, double w, double t) nogil:
    cdef double w2, s, d, delta, lp2, lm2, fp, fm, wx, wy, wb2, wg2, spread, den
    cdef double lo, hi, offset, a0, b0, a, b, b2, da, db
    w = fabs(w)
    w2 = w * w
    s = kpx + kpy
    d = kpx - kpy
    delta = sqrt(0.25 * d * d + 2.0 * w2 * s)
    if w < 1.4916681462400413e-154:
        a = _bose(sqrt(kpx), t)
        b = _bose(sqrt(kpy), t)
        return a if a < b else b
    lp2 = 0.5 * s + w2 + delta
    lm2 = (kpx - w2) * (kpy - w2) / lp2
    fp = _bose(sqrt(lp2), t)
    fm = _bose(sqrt(lm2), t)
    wx = sqrt(kpx - w2)
    wy = sqrt(kpy - w2)
    wb2 = 0.25 * (wx + wy) * (wx + wy)
    wg2 = wx * wy
    spread = 0.25 * (d / (wx + wy)) * (d / (wx + wy))
    den = (w2 + wb2) * (w2 + spread)
    lo = fp if fp < fm else fm
    hi = fm if fp < fm else fp
    offset = w2 * (
        spread * (0.5 + fp + fm) / (wg2 * (w2 + wb2))
        + 2.0 * spread * (w2 + spread) * fp * fm / (wg2 * den)
        - (hi - lo) * (hi - lo) * (w2 + wb2 + spread) / (2.0 * den)
    )
    a0 = 0.5 * (hi + lo + 1.0)
    b0 = 0.5 * (hi - lo)
    a = sqrt(a0 * a0 + 0.5 * offset)
    b2 = b0 * b0 + 0.5 * offset
    b = sqrt(b2) if b2 > 0.0 else 0.0
    da = 0.5 * offset / (a + a0)
    db = 0.5 * offset / (b + b0) if b + b0 > 0.0 else 0.0
    return lo + (da - db)


def ftilde_minus(double kpx, double kpy, double w, double t):
    """Smaller PPT symplectic eigenvalue at a sector-A point and temperature t."""
    return _ftilde_minus(kpx, kpy, w, t)


def bisect_root(double kpx, double kpy, double w, double lo, double hi, double xtol, int maxiter):
    """Bisection for ftilde_minus(T) = 0 on a sign-changing bracket [lo, hi]."""
    cdef double glo = _ftilde_minus(kpx, kpy, w, lo)
    cdef double mid, gm
    cdef int it = 0
    with nogil:
        while hi - lo > xtol and it < maxiter:
            mid = 0.5 * (lo + hi)
            gm = _ftilde_minus(kpx, kpy, w, mid)
            if gm == 0.0:
                hi = mid
                lo = mid
                it += 1
                break
            if (gm < 0.0) == (glo < 0.0):
                lo = mid
                glo = gm
            else:
                hi = mid
            it += 1
    return 0.5 * (lo + hi), it


def cond_det_grid(a_in, b_in, c_in, s_grid, phi_grid):
    """det of the conditional covariance a - c (b + sigma_m)^-1 c^T on a grid."""
    cdef double[:, ::1] a = np.ascontiguousarray(a_in, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(b_in, dtype=np.float64)
    cdef double[:, ::1] c = np.ascontiguousarray(c_in, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(s_grid, dtype=np.float64)
    cdef double[::1] pv = np.ascontiguousarray(phi_grid, dtype=np.float64)
    cdef Py_ssize_t ns = sv.shape[0], nphi = pv.shape[0], i, j
    out = np.empty((ns, nphi), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double cs, sn, s, b00, b11, b01, det, i00, i01, i11, m00, m11, m01, k00, k11, k01
    with nogil:
        for j in range(nphi):
            cs = cos(pv[j])
            sn = sin(pv[j])
            b00 = cs * cs * b[0, 0] + 2 * cs * sn * b[0, 1] + sn * sn * b[1, 1]
            b11 = sn * sn * b[0, 0] - 2 * cs * sn * b[0, 1] + cs * cs * b[1, 1]
            b01 = cs * sn * (b[1, 1] - b[0, 0]) + (cs * cs - sn * sn) * b[0, 1]
            for i in range(ns):
                s = sv[i]
                det = (b00 + s) * (s * b11 + 1.0) - s * b01 * b01
                i00 = (s * b11 + 1.0) / det
                i01 = -s * b01 / det
                i11 = s * (b00 + s) / det
                m00 = cs * cs * i00 - 2 * cs * sn * i01 + sn * sn * i11
                m11 = sn * sn * i00 + 2 * cs * sn * i01 + cs * cs * i11
                m01 = cs * sn * (i00 - i11) + (cs * cs - sn * sn) * i01
                k00 = c[0, 0] * (m00 * c[0, 0] + m01 * c[0, 1]) + c[0, 1] * (m01 * c[0, 0] + m11 * c[0, 1])
                k11 = c[1, 0] * (m00 * c[1, 0] + m01 * c[1, 1]) + c[1, 1] * (m01 * c[1, 0] + m11 * c[1, 1])
                k01 = c[0, 0] * (m00 * c[1, 0] + m01 * c[1, 1]) + c[0, 1] * (m01 * c[1, 0] + m11 * c[1, 1])
                o[i, j] = (a[0, 0] - k00) * (a[1, 1] - k11) - (a[0, 1] - k01) * (a[0, 1] - k01)
    return out
