"""Canonical transformation to normal modes.

The transformation

    P'_mu = P_mu + gamma Q_{-mu},   Q'_mu = (Q_mu - eta P_{-mu}) / (1 + eta gamma)

with (x, y) relabelled (+, -) brings H to sum_mu (alpha_mu P'^2 + beta_mu Q'^2)/2.
Expressions are evaluated in algebraically equivalent forms free of
cancellation, so edge points (lambda_- -> 0) keep full relative precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateTransform, UnstableSpectrum
from .model import ModelParams, SectorTag, classify_sector, effective_omega, scaled_delta2


@dataclass(frozen=True)
class NormalModeData:
    params: ModelParams
    sector: SectorTag
    delta: float
    gamma: float
    eta: float
    alpha_plus: float
    alpha_minus: float
    beta_plus: float
    beta_minus: float
    lambda_plus: float
    lambda_minus: float
    near_boundary: bool = False

    @property
    def lambdas(self) -> tuple[float, float]:
        return self.lambda_plus, self.lambda_minus


def _frequencies_squared(kpx, kpy, w):
    """Return (Delta, Delta^2, lambda_+^2, lambda_-^2); Delta^2 is -1 when negative."""
    w2 = w * w
    s = kpx + kpy
    unit, scaled, _ = scaled_delta2(kpx - kpy, w, s)
    delta2 = unit * unit * scaled if scaled >= 0 else -1.0
    c = 0.5 * s + w2
    delta = unit * math.sqrt(max(scaled, 0.0))
    lp2 = c + delta
    # lambda_+^2 lambda_-^2 = k_x k_y
    lm2 = (kpx - w2) * (kpy - w2) / lp2 if lp2 > 0 else c - delta
    return delta, delta2, lp2, lm2


def _coefficients(kpx, kpy, w, delta):
    """gamma, eta, alpha_+-, beta_+- omega != 0."""
    w2 = w * w
    s = kpx + kpy
    d = kpx - kpy
    if d >= 0:
        den = 2.0 * delta + d
        gamma = 2.0 * w * s / den
        eta = 4.0 * w / den
        g_w = 2.0 * s / den
        num = kpx + 3.0 * kpy
        if num > 0:
            # g_w - 1 = 8 s k_y / ((k'_x + 3k'_y + 2 Delta)(2 Delta + d))
            g_w_m1 = 8.0 * s * (kpy - w2) / ((num + 2.0 * delta) * den)
        else:
            g_w_m1 = g_w - 1.0
    else:
        gamma = (2.0 * delta - d) / (4.0 * w)
        g_w = (2.0 * delta - d) / (4.0 * w2)
        g_w_m1 = g_w - 1.0
        eta = (2.0 * delta - d) / (2.0 * w * s) if s != 0 else math.inf
    alpha_p = 1.0 - (w2 / delta) * g_w_m1
    alpha_m = 1.0 - (w2 / delta) * (g_w + 1.0)
    beta_p = delta * (g_w + 1.0)
    beta_m = delta * g_w_m1
    return gamma, eta, alpha_p, alpha_m, beta_p, beta_m


def diagonalize(params: ModelParams) -> NormalModeData:
    """Normal-mode data for a point with a discrete spectrum.

    Raises DegenerateTransform when Delta = 0 with omega != 0 and
    UnstableSpectrum when Delta^2 < 0 or a lambda^2 < 0.
    """
    cls = classify_sector(params)
    if cls.tag is SectorTag.DEGENERATE:
        raise DegenerateTransform(f"Delta = 0 at {params}")
    if cls.tag is SectorTag.UNSTABLE:
        raise UnstableSpectrum(f"no discrete spectrum at {params}")
    kpx, kpy = params.kprime
    w = effective_omega(params.omega)

    if w == 0:
        hi, lo = max(kpx, kpy), min(kpx, kpy)
        return NormalModeData(params, cls.tag, abs(kpx - kpy) / 2, 0.0, 0.0, 1.0, 1.0, hi, lo,
                              math.sqrt(hi), math.sqrt(lo), cls.near_boundary)

    delta, _, lp2, lm2 = _frequencies_squared(kpx, kpy, w)
    gamma, eta, ap, am, bp, bm = _coefficients(kpx, kpy, w, delta)
    # lambda^2 = alpha beta; dividing avoids the cancellation in 1 - (w^2/Delta)(...)
    if bp != 0:
        ap = lp2 / bp
    if bm != 0 and lm2 > 0:
        am = lm2 / bm
    if cls.tag is SectorTag.LANDAU:
        lm2 = 0.0
    lam_p = math.copysign(math.sqrt(lp2), ap)
    lam_m = math.copysign(math.sqrt(max(lm2, 0.0)), am) if lm2 > 0 else 0.0
    return NormalModeData(params, cls.tag, delta, gamma, eta, ap, am, bp, bm,
                          lam_p, lam_m, cls.near_boundary)


def mode_frequencies(params: ModelParams) -> tuple[float, float]:
    """Signed (lambda_+, lambda_-) without the transformation coefficients.

    lambda_- is negative in the non-positive stable sectors B, B1, B2.
    """
    kpx, kpy = params.kprime
    w = effective_omega(params.omega)
    delta, delta2, lp2, lm2 = _frequencies_squared(kpx, kpy, w)
    if delta2 < 0 or lp2 < 0 or lm2 < 0:
        raise UnstableSpectrum(f"lambda^2 < 0 at {params}")
    kx, ky = params.k
    positive = kx > 0 and ky > 0
    if delta == 0 and w != 0:
        sign = 1.0 if positive else -1.0
        return math.sqrt(lp2), sign * math.sqrt(lm2)
    lam_m = math.sqrt(lm2)
    if not positive and w != 0:
        lam_m = -lam_m
    return math.sqrt(lp2), lam_m


def transformation_matrix(modes: NormalModeData) -> np.ndarray:
    """Matrix mapping (Q_x, Q_y, P_x, P_y) to (Q'_+, Q'_-, P'_+, P'_-)."""
    kpx, kpy = modes.params.kprime
    if effective_omega(modes.params.omega) == 0 and kpx < kpy:
        # decoupled with the stiffer oscillator along y: + is the y mode
        return np.eye(4)[[1, 0, 3, 2]]
    g, e = modes.gamma, modes.eta
    n = 1.0 + e * g
    return np.array([
        [1.0 / n, 0.0, 0.0, -e / n],
        [0.0, 1.0 / n, -e / n, 0.0],
        [0.0, g, 1.0, 0.0],
        [g, 0.0, 0.0, 1.0],
    ])


def hamiltonian_matrix(params: ModelParams) -> np.ndarray:
    """Symmetric M with H = R^T M R / 2 for R = (Q_x, Q_y, P_x, P_y)."""
    kpx, kpy = params.kprime
    w = params.omega
    return np.array([
        [kpx, 0.0, 0.0, -w],
        [0.0, kpy, w, 0.0],
        [0.0, w, 1.0, 0.0],
        [-w, 0.0, 0.0, 1.0],
    ])


SYMPLECTIC_J = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
