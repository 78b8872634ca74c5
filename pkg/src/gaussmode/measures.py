"""Local symplectic eigenvalues, entanglement entropy, PPT eigenvalues and
negativity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import CovarianceMatrix, ThermalOccupations, symplectic_spectrum
from .errors import NonPhysical, OutOfSector
from .model import ModelParams, SectorTag, View, classify_sector

MODES = {"x": 0, "y": 1}


def _mode_index(mode) -> int:
    if mode in MODES:
        return MODES[mode]
    if mode in (0, 1):
        return int(mode)
    raise ValueError(f"mode must be 'x' or 'y', got {mode!r}")


def local_symplectic_eigenvalue(cov: CovarianceMatrix, mode) -> float:
    """f_mu = sqrt(<Q_mu^2><P_mu^2>) - 1/2 (valid because L_mumu = 0)."""
    i = _mode_index(mode)
    prod = cov.var_q(i) * cov.var_p(i)
    if prod < 0.25 - 1e-12:
        raise NonPhysical(f"<Q^2><P^2> = {prod!r} < 1/4 for mode {mode}")
    return max(math.sqrt(prod) - 0.5, 0.0)


def bosonic_entropy(f: float) -> float:
    """h(f) = -f ln f + (1+f) ln(1+f), the entropy of a thermal mode with occupation f."""
    if f < 0:
        raise ValueError(f"occupation must be >= 0, got {f!r}")
    if f == 0:
        return 0.0
    if f < 1.0:
        return -f * math.log(f) + (1.0 + f) * math.log1p(f)
    # same expression regrouped so large f does not cancel
    return f * math.log1p(1.0 / f) + math.log1p(f)


def omega_averages(params: ModelParams) -> tuple[float, float]:
    """(|mean|, |geometric mean|) of the frequencies omega_mu = sqrt(k_mu).

    In the repulsive case both frequencies are imaginary and the moduli of
    the averages are returned.
    """
    kx, ky = params.k
    if kx > 0 and ky > 0:
        wx, wy = math.sqrt(kx), math.sqrt(ky)
        return 0.5 * (wx + wy), math.sqrt(wx * wy)
    if kx < 0 and ky < 0:
        wx, wy = math.sqrt(-kx), math.sqrt(-ky)
        return 0.5 * (wx + wy), math.sqrt(wx * wy)
    raise OutOfSector(f"frequency averages undefined for k = {(kx, ky)}")


def vacuum_excess_closed(params: ModelParams) -> float:
    """f (f + 1) of either local mode in the vacuum, from the frequency averages.

    Written as omega^2 ((omega_x - omega_y)/2)^2 / (4 omega-bar_g^2 |omega-bar^2 +- omega^2|)
    so that isotropy gives exactly 0 and small couplings keep full precision.
    """
    cls = classify_sector(params)
    tag = cls.tag
    if tag is SectorTag.LANDAU and not cls.near_boundary:
        return 0.0
    if not tag.stable or tag is SectorTag.LANDAU:
        raise OutOfSector(f"vacuum closed form undefined in sector {tag.value}")
    w2 = params.omega ** 2
    wb, wg = omega_averages(params)
    wx, wy = (math.sqrt(abs(k)) for k in params.k)
    if params.view is View.FIXED_KPRIME:
        # |k_x| - |k_y| from k' directly; k itself carries omega^2 rounding
        split = params.kx - params.ky if tag is SectorTag.A else params.ky - params.kx
    else:
        split = abs(params.k[0]) - abs(params.k[1])
    # (f + 1/2)^2 = R/4, so f (f + 1) = (R - 1)/4 with R - 1 = omega^2 spread / (...)
    spread = 0.0625 * (split / (wx + wy)) ** 2
    if tag is SectorTag.A:
        return w2 * spread / (wg * wg * (wb * wb + w2))
    if params.view is View.FIXED_KPRIME:
        _, gap_b = _repulsive_gaps(params.kx, params.ky, w2, wg)
    else:
        gap_b = w2 - wb * wb
    return w2 * spread / (wg * wg * gap_b)


def occupation_from_excess(x: float) -> float:
    """The f >= 0 with f (f + 1) = x."""
    return x / (math.sqrt(0.25 + x) + 0.5)


def vacuum_f_closed(params: ModelParams) -> float:
    """Vacuum local occupation from the frequency averages, same for both modes."""
    return occupation_from_excess(vacuum_excess_closed(params))


def _repulsive_gaps(kpx, kpy, w2, wg):
    """(omega^2 - omega-bar_g^2, omega^2 - omega-bar^2) from k' without cancellation.

    With omega_mu^2 = omega^2 - k'_mu both differences are O(k') while the
    terms are O(omega^2).
    """
    s = kpx + kpy
    gap_g = (w2 * s - kpx * kpy) / (w2 + wg * wg)
    return gap_g, 0.25 * (s + 2.0 * gap_g)


def ppt_eigenvalues(cov: CovarianceMatrix, occ: ThermalOccupations) -> tuple[float, float]:
    """(f~_+, f~_-) of the partially transposed state from local and global
    occupations."""
    fx = local_symplectic_eigenvalue(cov, "x")
    fy = local_symplectic_eigenvalue(cov, "y")
    return ppt_from_occupations((fx, fy), occ)


def ppt_from_occupations(f_local, occ: ThermalOccupations) -> tuple[float, float]:
    nu_p, nu_m = occ.f_plus + 0.5, occ.f_minus + 0.5
    beta = nu_p * nu_m
    total = occ.f_plus + occ.f_minus
    # alpha~ -/+ beta regrouped around f (f + 1) so separable points do not cancel
    excess = sum(f * (1.0 + f) for f in f_local)
    gap = excess - 0.5 * total * (total + 2.0)
    if gap < -1e-10 * max(1.0, beta):
        raise NonPhysical(f"alpha~ - beta = {gap!r} < 0")
    spread = occ.f_plus - occ.f_minus
    a2_shift = 0.5 * excess - 0.25 * spread * spread  # a^2 - 1/4
    a = math.sqrt(0.25 + a2_shift)
    b = math.sqrt(max(0.5 * gap, 0.0))
    # f~_- = beta/(a+b) - 1/2 = (2 beta - a - b) / (2(a+b)) with 2 beta - a
    # expanded as (4 beta^2 - a^2) / (2 beta + a); keeps O(b) at tiny coupling
    prod = 2.0 * total + 4.0 * occ.f_plus * occ.f_minus  # 4 nu_+ nu_- - 1
    four_b2_minus_a2 = 0.25 * prod * (prod + 2.0) - a2_shift
    ft_minus = (four_b2_minus_a2 / (2.0 * beta + a) - b) / (2.0 * (a + b))
    ft_plus = a2_shift / (a + 0.5) + b
    return ft_plus, ft_minus


def ppt_eigenvalues_direct(cov: CovarianceMatrix) -> tuple[float, float]:
    """Symplectic spectrum of the P_y-flipped covariance, (f~_+, f~_-)."""
    lo, hi = symplectic_spectrum(cov.partial_transpose(), check=False)
    return hi, lo


def negativity(f_tilde_minus: float) -> float:
    if f_tilde_minus >= 0:
        return 0.0
    return -f_tilde_minus / (1.0 + 2.0 * f_tilde_minus)


def is_entangled(f_local, occ: ThermalOccupations) -> bool:
    """PPT violation written on the occupations alone."""
    g_local = sum(f * (1.0 + f) for f in f_local)
    gp, gm = occ.f_plus * (1.0 + occ.f_plus), occ.f_minus * (1.0 + occ.f_minus)
    return g_local > gp + gm + 2.0 * gp * gm


def vacuum_negativity(f: float) -> float:
    return f + math.sqrt(f * (f + 1.0))


def local_sum_identity(params: ModelParams, occ: ThermalOccupations) -> float:
    """sum_mu (f_mu + 1/2)^2 expressed through omega-bar, omega-bar_g and f'_mu.

    Sector A, FIXED_K-equivalent averages.  Kept as a cross-check of the
    covariance route.
    """
    wb, wg = omega_averages(params)
    w2 = params.omega ** 2
    wb2, wg2 = wb * wb, wg * wg
    wx, wy = (math.sqrt(abs(k)) for k in params.k)
    # omega-bar^2 - omega-bar_g^2 = ((omega_x - omega_y) / 2)^2, exactly
    spread = 0.25 * (wx - wy) ** 2
    fp, fm = occ.f_plus, occ.f_minus
    t1 = wb2 * (w2 + wg2) / (2 * wg2 * (w2 + wb2)) * (1 + 2 * (fp + fm))
    den = (w2 + wb2) * (w2 + spread)
    if den == 0:
        # decoupled isotropic modes: the local modes are the normal modes
        return (fp + 0.5) ** 2 + (fm + 0.5) ** 2
    t2 = (w2 * (w2 + 2 * wb2 - wg2) + 2 * wb2 * spread) / (2 * den) * (fp * fp + fm * fm)
    t3 = w2 * ((w2 - wg2) * (2 * wb2 - wg2) + 2 * wb2 * wb2) / (wg2 * den) * fp * fm
    return t1 + t2 + t3


@dataclass(frozen=True)
class EntanglementReport:
    params: ModelParams
    sector: SectorTag
    f_local: tuple[float, float]
    f_prime: tuple[float, float]
    f_tilde: tuple[float, float]
    entropy: float
    entropy_y: float
    negativity: float
    mean_lz: float
    omega_bars: tuple[float, float] | None
    discord_x: float | None = None
    discord_y: float | None = None
    near_boundary: bool = False

    @property
    def entangled(self) -> bool:
        return self.negativity > 0

    def as_dict(self) -> dict:
        wb = self.omega_bars or (math.nan, math.nan)
        return {
            "sector": self.sector.value,
            "near_boundary": self.near_boundary,
            "f_x": self.f_local[0],
            "f_y": self.f_local[1],
            "fp_plus": self.f_prime[0],
            "fp_minus": self.f_prime[1],
            "ft_plus": self.f_tilde[0],
            "ft_minus": self.f_tilde[1],
            "S_x": self.entropy,
            "S_y": self.entropy_y,
            "N": self.negativity,
            "D_x": np.nan if self.discord_x is None else self.discord_x,
            "D_y": np.nan if self.discord_y is None else self.discord_y,
            "Lz": self.mean_lz,
            "omega_bar": wb[0],
            "omega_bar_g": wb[1],
        }
