"""Occupations, covariance matrices and symplectic spectra.

Second moments are ordered R = (Q_x, Q_y, P_x, P_y).  The mixed block holds
the symmetrized averages L_{mu nu} = <Q_mu P_nu + P_nu Q_mu> / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPhysical, ThermalUndefined, UnstableSpectrum
from .model import SectorTag
from .spectral import NormalModeData, diagonalize

_OVERFLOW_RATIO = 700.0
_SERIES_RATIO = 1e-8


def bose_occupation(lam: float, temperature: float) -> float:
    """Mean occupation 1/(exp(lam/T) - 1) with overflow/underflow guards."""
    if temperature == 0:
        return 0.0
    x = lam / temperature
    if x > _OVERFLOW_RATIO:
        return 0.0
    if x < _SERIES_RATIO:
        return 1.0 / x - 0.5
    return 1.0 / math.expm1(x)


@dataclass(frozen=True)
class ThermalOccupations:
    f_plus: float
    f_minus: float
    temperature: float = 0.0

    def as_tuple(self) -> tuple[float, float]:
        return self.f_plus, self.f_minus


def thermal_occupations(modes: NormalModeData, temperature: float) -> ThermalOccupations:
    if temperature < 0:
        raise ValueError("temperature must be >= 0")
    if temperature == 0:
        return ThermalOccupations(0.0, 0.0, 0.0)
    if modes.sector is not SectorTag.A:
        raise ThermalUndefined(f"thermal state needs sector A, got {modes.sector.value}")
    return ThermalOccupations(
        bose_occupation(modes.lambda_plus, temperature),
        bose_occupation(modes.lambda_minus, temperature),
        temperature,
    )


METRIC_R = 1j * np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


@dataclass(frozen=True)
class CovarianceMatrix:
    second_moments: np.ndarray

    @property
    def symplectic_metric(self) -> np.ndarray:
        return METRIC_R

    @property
    def q(self) -> np.ndarray:
        return self.second_moments[:2, :2]

    @property
    def p(self) -> np.ndarray:
        return self.second_moments[2:, 2:]

    @property
    def l(self) -> np.ndarray:
        return self.second_moments[:2, 2:]

    def var_q(self, mode: int) -> float:
        return float(self.second_moments[mode, mode])

    def var_p(self, mode: int) -> float:
        return float(self.second_moments[2 + mode, 2 + mode])

    def partial_transpose(self) -> "CovarianceMatrix":
        """P_y -> -P_y."""
        flip = np.array([1.0, 1.0, 1.0, -1.0])
        return CovarianceMatrix(self.second_moments * np.outer(flip, flip))

    def to_quadrature_order(self) -> np.ndarray:
        """Covariance with vacuum = identity, ordered (Q_x, P_x, Q_y, P_y)."""
        idx = [0, 2, 1, 3]
        return 2.0 * self.second_moments[np.ix_(idx, idx)]


def _primed_moments(modes: NormalModeData, occ: ThermalOccupations):
    """<Q'^2>, <P'^2> for both normal modes."""
    out = []
    for f, lam, a, b in ((occ.f_plus, modes.lambda_plus, modes.alpha_plus, modes.beta_plus),
                         (occ.f_minus, modes.lambda_minus, modes.alpha_minus, modes.beta_minus)):
        if lam == 0:
            if modes.sector is not SectorTag.LANDAU or modes.near_boundary:
                raise UnstableSpectrum("zero mode at an anisotropic stability edge")
            # Landau convention b'_- = sqrt(w) Q' + i P'/sqrt(4 w)
            w = abs(modes.params.omega)
            out.append(((f + 0.5) / (2.0 * w), (f + 0.5) * 2.0 * w))
        else:
            out.append(((f + 0.5) * lam / b, (f + 0.5) * lam / a))
    return out


def _moments_oriented(modes: NormalModeData, occ: ThermalOccupations) -> np.ndarray:
    (qp, pp), (qm, pm) = _primed_moments(modes, occ)
    g, e = modes.gamma, modes.eta
    n2 = (1.0 + g * e) ** 2
    m = np.zeros((4, 4))
    m[0, 0] = qp + e * e / n2 * pm
    m[1, 1] = qm + e * e / n2 * pp
    m[2, 2] = pp / n2 + g * g * qm
    m[3, 3] = pm / n2 + g * g * qp
    m[0, 3] = m[3, 0] = -g * qp + e / n2 * pm
    m[1, 2] = m[2, 1] = -g * qm + e / n2 * pp
    return m


def build_covariance(modes: NormalModeData, occ: ThermalOccupations) -> CovarianceMatrix:
    """Covariance of the vacuum / thermal state of the normal-mode bosons.

    Evaluated in the labelling with k'_x >= k'_y, where the transformation is
    well conditioned; the other orientation is obtained by relabelling.
    """
    kpx, kpy = modes.params.kprime
    if kpx >= kpy:
        return CovarianceMatrix(_moments_oriented(modes, occ))
    swapped = diagonalize(modes.params.swapped())
    m = _moments_oriented(swapped, occ)
    perm = [1, 0, 3, 2]
    return CovarianceMatrix(m[np.ix_(perm, perm)])


def symplectic_spectrum(cov: CovarianceMatrix, check: bool = True) -> tuple[float, float]:
    """The two symplectic eigenvalues (f'_+, f'_-), smaller one first.

    The matrix i[[-L, Q], [-P, L^t]] - I/2 built from the moment blocks has
    spectrum {f'_mu, -1 - f'_mu}.  With ``check`` a value below -1e-10 raises NonPhysical.
    """
    s = cov.second_moments
    w, v = np.linalg.eigh(s)
    if w.min() > 0:
        # i s J is similar to the Hermitian s^1/2 (iJ) s^1/2; eigvalsh keeps
        # degenerate pairs accurate to rounding instead of sqrt(eps)
        root = (v * np.sqrt(w)) @ v.T
        ev = np.linalg.eigvalsh(root @ METRIC_R @ root)[2:] - 0.5
    else:
        q, p, l = cov.q, cov.p, cov.l
        k = 1j * np.block([[-l, q], [-p, l.T]]) - 0.5 * np.eye(4)
        ev = np.sort(np.linalg.eigvals(k).real)[2:]
    if check and ev[0] < -1e-10:
        raise NonPhysical(f"negative symplectic eigenvalue {ev[0]:.3e}")
    if check:
        ev = np.maximum(ev, 0.0)
    return float(ev[0]), float(ev[1])


def mean_angular_momentum(cov: CovarianceMatrix) -> float:
    """<L_z> = <Q_x P_y> - <Q_y P_x> (the operators in each product commute)."""
    return float(cov.second_moments[0, 3] - cov.second_moments[1, 2])


def covariance_at(params, temperature: float | None = None):
    """(modes, occupations, covariance) for one parameter point."""
    modes = diagonalize(params)
    t = params.temperature if temperature is None else temperature
    occ = thermal_occupations(modes, t)
    return modes, occ, build_covariance(modes, occ)
