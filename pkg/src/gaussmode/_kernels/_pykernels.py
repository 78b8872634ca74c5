"""Pure Python twin of ``_ckernels.pyx``; same signatures, same arithmetic."""
import math

import numpy as np


def bose(lam, t):
    if t == 0.0:
        return 0.0
    x = lam / t
    if x > 700.0:
        return 0.0
    if x < 1e-8:
        return 1.0 / x - 0.5
    return 1.0 / math.expm1(x)


def ftilde_minus(kpx, kpy, w, t):
    """Smaller PPT symplectic eigenvalue at a sector-A point and temperature t."""
    w = abs(w)
    w2 = w * w
    s = kpx + kpy
    d = kpx - kpy
    delta = math.sqrt(0.25 * d * d + 2.0 * w2 * s)
    if w < 2.0 ** -511:
        # decoupled oscillators (omega^2 below the normal range): the PPT spectrum is the occupations themselves
        return min(bose(math.sqrt(kpx), t), bose(math.sqrt(kpy), t))
    lp2 = 0.5 * s + w2 + delta
    lm2 = (kpx - w2) * (kpy - w2) / lp2
    fp = bose(math.sqrt(lp2), t)
    fm = bose(math.sqrt(lm2), t)
    wx = math.sqrt(kpx - w2)
    wy = math.sqrt(kpy - w2)
    wb2 = 0.25 * (wx + wy) ** 2
    wg2 = wx * wy
    spread = 0.25 * (d / (wx + wy)) ** 2
    den = (w2 + wb2) * (w2 + spread)
    lo, hi = min(fp, fm), max(fp, fm)
    # PPT invariant minus its decoupled value, factored through omega^2
    offset = w2 * (
        spread * (0.5 + fp + fm) / (wg2 * (w2 + wb2))
        + 2.0 * spread * (w2 + spread) * fp * fm / (wg2 * den)
        - (hi - lo) ** 2 * (w2 + wb2 + spread) / (2.0 * den)
    )
    # a, b = half sum and half difference of the PPT spectrum, shifted from
    # their decoupled values by offset/2 in the square
    a0 = 0.5 * (hi + lo + 1.0)
    b0 = 0.5 * (hi - lo)
    a = math.sqrt(a0 * a0 + 0.5 * offset)
    b = math.sqrt(max(b0 * b0 + 0.5 * offset, 0.0))
    da = 0.5 * offset / (a + a0)
    db = 0.5 * offset / (b + b0) if b + b0 > 0.0 else 0.0
    return lo + (da - db)


def bisect_root(kpx, kpy, w, lo, hi, xtol, maxiter):
    """Bisection for ftilde_minus(T) = 0 on a sign-changing bracket [lo, hi].

    Returns (root, iterations).
    """
    glo = ftilde_minus(kpx, kpy, w, lo)
    it = 0
    while hi - lo > xtol and it < maxiter:
        mid = 0.5 * (lo + hi)
        gm = ftilde_minus(kpx, kpy, w, mid)
        if gm == 0.0:
            return mid, it + 1
        if (gm < 0.0) == (glo < 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
        it += 1
    return 0.5 * (lo + hi), it


def cond_det_grid(a, b, c, s_grid, phi_grid):
    """det of the conditional covariance a - c (b + sigma_m)^-1 c^T.

    ``a``, ``b``, ``c`` are 2x2 blocks (vacuum = identity).  The pure
    measurement seed is R(phi) diag(s, 1/s) R(phi)^T with s = exp(-2 r);
    s = 0 is the homodyne limit, handled by multiplying through by s.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    s = np.asarray(s_grid, dtype=float)[:, None]
    phi = np.asarray(phi_grid, dtype=float)[None, :]
    cs, sn = np.cos(phi), np.sin(phi)
    # b rotated into the seed frame: b' = R^T b R
    b00 = cs * cs * b[0, 0] + 2 * cs * sn * b[0, 1] + sn * sn * b[1, 1]
    b11 = sn * sn * b[0, 0] - 2 * cs * sn * b[0, 1] + cs * cs * b[1, 1]
    b01 = cs * sn * (b[1, 1] - b[0, 0]) + (cs * cs - sn * sn) * b[0, 1]
    det = (b00 + s) * (s * b11 + 1.0) - s * b01 * b01
    i00 = (s * b11 + 1.0) / det
    i01 = -s * b01 / det
    i11 = s * (b00 + s) / det
    # rotate inverse back: inv = R i R^T
    m00 = cs * cs * i00 - 2 * cs * sn * i01 + sn * sn * i11
    m11 = sn * sn * i00 + 2 * cs * sn * i01 + cs * cs * i11
    m01 = cs * sn * (i00 - i11) + (cs * cs - sn * sn) * i01
    # c inv c^T
    k00 = c[0, 0] * (m00 * c[0, 0] + m01 * c[0, 1]) + c[0, 1] * (m01 * c[0, 0] + m11 * c[0, 1])
    k11 = c[1, 0] * (m00 * c[1, 0] + m01 * c[1, 1]) + c[1, 1] * (m01 * c[1, 0] + m11 * c[1, 1])
    k01 = c[0, 0] * (m00 * c[1, 0] + m01 * c[1, 1]) + c[0, 1] * (m01 * c[1, 0] + m11 * c[1, 1])
    return (a[0, 0] - k00) * (a[1, 1] - k11) - (a[0, 1] - k01) ** 2
