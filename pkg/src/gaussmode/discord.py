"""Gaussian quantum discord.

Closed form through the symplectic invariants (A, B, C, D) of the two-mode
covariance, plus a brute-force minimisation over pure gaussian measurements
that serves as an independent check.  Covariances here use the vacuum = 1
normalisation, i.e. twice the second moments, in (Q_x, P_x, Q_y, P_y) order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .covariance import CovarianceMatrix, ThermalOccupations, symplectic_spectrum
from .measures import _mode_index, bosonic_entropy
from .model import ModelParams, View, to_fixed_k

# below this |B - 1| the first E_min branch is 0/0 and the second is exact
_B_ONE_TOL = 1e-12


@dataclass(frozen=True)
class DiscordInvariants:
    inv_a: float
    inv_b: float
    inv_c: float
    inv_d: float
    e_min: float

    def swapped(self) -> "DiscordInvariants":
        return DiscordInvariants.build(self.inv_b, self.inv_a, self.inv_c, self.inv_d)

    @classmethod
    def build(cls, a, b, c, d) -> "DiscordInvariants":
        return cls(a, b, c, d, e_min(a, b, c, d))


def discord_invariants(f_local, occ: ThermalOccupations) -> DiscordInvariants:
    """Invariants for a measurement on mode y (A belongs to the unmeasured x)."""
    fx, fy = f_local
    nu = (occ.f_plus + 0.5, occ.f_minus + 0.5)
    a = 4.0 * (fx + 0.5) ** 2
    b = 4.0 * (fy + 0.5) ** 2
    c = 2.0 * sum(n * n - (f + 0.5) ** 2 for n, f in zip(nu, f_local))
    d = 16.0 * (nu[0] * nu[1]) ** 2
    return DiscordInvariants.build(a, b, c, d)


def invariants_from_covariance(cov: CovarianceMatrix) -> DiscordInvariants:
    """Same invariants read off the blocks, C carrying its sign."""
    s = cov.to_quadrature_order()
    a = float(np.linalg.det(s[:2, :2]))
    b = float(np.linalg.det(s[2:, 2:]))
    c = float(np.linalg.det(s[:2, 2:]))
    d = float(np.linalg.det(s))
    return DiscordInvariants.build(a, b, c, d)


def e_min(a: float, b: float, c: float, d: float) -> float:
    """Minimal conditional determinant of the unmeasured mode over gaussian
    measurements of the other one (two-branch closed form)."""
    c2 = c * c
    bm1 = b - 1.0
    if abs(bm1) > _B_ONE_TOL and (d - a * b) ** 2 <= (1.0 + b) * c2 * (a + d):
        root = math.sqrt(max(c2 + bm1 * (d - a), 0.0))
        return (2.0 * c2 + bm1 * (d - a) + 2.0 * abs(c) * root) / (bm1 * bm1)
    rad = c2 * c2 + (d - a * b) ** 2 - 2.0 * c2 * (a * b + d)
    return (a * b - c2 + d - math.sqrt(max(rad, 0.0))) / (2.0 * b)


def conditional_occupation(e: float) -> float:
    return max(0.5 * math.sqrt(e) - 0.5, 0.0)


def gaussian_discord(f_local, occ: ThermalOccupations, measured_mode="y") -> float:
    """D^mu: discord when mode mu is measured.  Clipped at 0 against rounding."""
    i = _mode_index(measured_mode)
    inv = discord_invariants(f_local, occ)
    if i == 0:
        inv = inv.swapped()
    value = (
        bosonic_entropy(conditional_occupation(inv.e_min))
        - bosonic_entropy(occ.f_plus)
        - bosonic_entropy(occ.f_minus)
        + bosonic_entropy(f_local[i])
    )
    return max(value, 0.0)


@dataclass(frozen=True)
class MeasurementGrid:
    """Search grid over seeds R(phi) diag(s, 1/s) R(phi)^T, s = exp(-2 r).

    ``r_max = inf`` includes the homodyne limit s = 0.
    """
    r_max: float = math.inf
    n_s: int = 65
    n_phi: int = 64
    step_tol: float = 1e-5
    candidates: int = 3
    max_rounds: int = 60


@dataclass(frozen=True)
class OracleResult:
    discord: float
    e_min: float
    squeezing: float
    angle: float
    converged: bool


def _blocks(cov: CovarianceMatrix, measured: int):
    s = cov.to_quadrature_order()
    kept, meas = (slice(2, 4), slice(0, 2)) if measured == 0 else (slice(0, 2), slice(2, 4))
    return s[kept, kept], s[meas, meas], s[kept, meas]


def _refine(a, b, c, s0, phi0, ds, dphi, s_lo, grid: MeasurementGrid):
    best = None
    for _ in range(grid.max_rounds):
        s_vals = np.linspace(max(s0 - 2 * ds, s_lo), min(s0 + 2 * ds, 1.0), 9)
        phi_vals = np.linspace(phi0 - 2 * dphi, phi0 + 2 * dphi, 9)
        det = _kernels.cond_det_grid(a, b, c, s_vals, phi_vals)
        i, j = np.unravel_index(np.argmin(det), det.shape)
        best = (float(det[i, j]), float(s_vals[i]), float(phi_vals[j]))
        _, s0, phi0 = best
        ds, dphi = ds / 2.0, dphi / 2.0
        if ds <= grid.step_tol and dphi <= grid.step_tol:
            break
    return best


def discord_minimization_oracle(cov: CovarianceMatrix, measured_mode="y",
                                grid: MeasurementGrid | None = None) -> OracleResult:
    """Brute-force gaussian discord: grid search plus zoom refinement of the
    conditional determinant."""
    grid = grid or MeasurementGrid()
    m = _mode_index(measured_mode)
    a, b, c = _blocks(cov, m)
    s_lo = 0.0 if math.isinf(grid.r_max) else math.exp(-2.0 * grid.r_max)
    s_vals = np.linspace(s_lo, 1.0, grid.n_s)
    phi_vals = np.linspace(0.0, math.pi, grid.n_phi, endpoint=False)
    det = _kernels.cond_det_grid(a, b, c, s_vals, phi_vals)
    # candidate order: value, then larger s (smaller r), then smaller phi
    order = np.lexsort((np.tile(phi_vals, grid.n_s), -np.repeat(s_vals, grid.n_phi), det.ravel()))
    ds, dphi = s_vals[1] - s_vals[0], phi_vals[1] - phi_vals[0]
    results = []
    for flat in order[: grid.candidates]:
        i, j = divmod(int(flat), grid.n_phi)
        results.append(_refine(a, b, c, s_vals[i], phi_vals[j], ds, dphi, s_lo, grid))
    e, s_best, phi_best = min(results, key=lambda r: (r[0], -r[1], r[2]))
    converged = math.isinf(grid.r_max) or s_best > s_lo + grid.step_tol

    nu_lo, nu_hi = symplectic_spectrum(cov)
    f_meas = 0.5 * math.sqrt(float(np.linalg.det(b))) - 0.5
    value = (bosonic_entropy(conditional_occupation(e)) - bosonic_entropy(nu_lo)
             - bosonic_entropy(nu_hi) + bosonic_entropy(max(f_meas, 0.0)))
    r = math.inf if s_best == 0 else abs(0.5 * math.log(s_best))
    return OracleResult(max(value, 0.0), e, r, phi_best % math.pi, converged)


def discord_high_t_asymptote(params: ModelParams, measured_mode="y") -> float:
    """Leading high-temperature discord, proportional to 1/T."""
    p = params if params.view is View.FIXED_K else to_fixed_k(params)
    if p.temperature <= 0:
        raise ValueError("asymptote needs T > 0")
    other_k = p.kx if _mode_index(measured_mode) == 1 else p.ky
    w2 = p.omega ** 2
    return w2 / (2.0 * p.temperature * math.sqrt(w2 + other_k))
