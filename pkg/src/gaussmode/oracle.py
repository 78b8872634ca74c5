"""Truncated Fock-space brute force for the two coupled modes.

The Hamiltonian is built in the product number basis |n_x, n_y> with
n_mu <= n_max and diagonalised densely.  Entropies come from partial traces,
negativity from the partial transpose.  Nothing here touches the covariance
machinery, so it independently checks every gaussian formula.

For the y mode the ladder operator c = -i b_y is used.  This makes the matrix
real symmetric; the number states differ from those of b_y only by phases
i^n, which are local unitaries, so entropies, the partial-transpose spectrum
and <L_z> are unchanged.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceFailure, ThermalUndefined
from .model import ModelParams, SectorTag, classify_sector
from .report import analyze
from .spectral import mode_frequencies


@dataclass(frozen=True)
class FockConfig:
    n_max: int = 40
    convergence: tuple[int, int] | None = None
    tol: float = 1e-6

    def __post_init__(self):
        if self.n_max < 2:
            raise ValueError("n_max must be >= 2")
        if self.convergence is not None:
            lo, hi = self.convergence
            if not 2 <= lo < hi:
                raise ValueError("convergence cutoffs must be strictly increasing and >= 2")


@dataclass(frozen=True)
class FockState:
    """Density matrix in the |n_x, n_y> basis, stored with its eigensystem."""
    rho: np.ndarray
    label: str
    n_max: int
    energies: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    def mean_energy(self) -> float:
        return float(np.dot(self.weights, self.energies[: self.weights.size]))

    def purity(self) -> float:
        return float(np.sum(self.weights ** 2))


def _ladder(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def angular_momentum_fock(n_max: int) -> np.ndarray:
    """L_z = b_x^dag c + c^dag b_x in the real gauge."""
    d = n_max + 1
    a = _ladder(d)
    return np.kron(a.T, a) + np.kron(a, a.T)


def build_hamiltonian_fock(params: ModelParams, config: FockConfig | None = None) -> np.ndarray:
    config = config or FockConfig()
    d = config.n_max + 1
    a = _ladder(d)
    eye = np.eye(d)
    num = np.diag(np.arange(d, dtype=float))
    pair = a @ a + a.T @ a.T
    kpx, kpy = params.kprime
    # 1/2 (P^2 + k' Q^2) = g+ (n + 1/2) + (g-/2)(b^2 + b^dag^2), g+- = (k' +- 1)/2
    hx = 0.5 * (kpx + 1) * (num + 0.5 * eye) + 0.25 * (kpx - 1) * pair
    # b_y = i c flips the sign of the pair term
    hy = 0.5 * (kpy + 1) * (num + 0.5 * eye) - 0.25 * (kpy - 1) * pair
    h = np.kron(hx, eye) + np.kron(eye, hy) - params.omega * angular_momentum_fock(config.n_max)
    return 0.5 * (h + h.T)


def _require_a(params: ModelParams):
    tag = classify_sector(params).tag
    if tag is not SectorTag.A:
        raise ThermalUndefined(f"Fock states need a Hamiltonian bounded below (sector A), got {tag.value}")


def thermal_state_fock(params: ModelParams, temperature: float, config: FockConfig | None = None) -> FockState:
    """Z^-1 exp(-H/T), or the ground-state projector at T = 0."""
    config = config or FockConfig()
    _require_a(params)
    energies, vecs = np.linalg.eigh(build_hamiltonian_fock(params, config))
    if temperature == 0:
        w = np.array([1.0])
        label = "ground"
    else:
        w = np.exp(-(energies - energies[0]) / temperature)
        w /= w.sum()
        # states with negligible weight are dropped
        keep = int(np.searchsorted(-w, -1e-18 * w[0], side="right"))
        w = w[: max(keep, 1)]
        w /= w.sum()
        label = f"thermal T={temperature!r}"
    v = vecs[:, : w.size]
    rho = (v * w) @ v.T
    return FockState(rho, label, config.n_max, energies, w)


def ground_state_fock(params: ModelParams, config: FockConfig | None = None) -> FockState:
    return thermal_state_fock(params, 0.0, config)


def _von_neumann(rho: np.ndarray) -> float:
    p = np.linalg.eigvalsh(rho)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def reduced_states(state: FockState) -> tuple[np.ndarray, np.ndarray]:
    d = state.dim
    r = state.rho.reshape(d, d, d, d)
    return np.einsum("ijkj->ik", r), np.einsum("ijil->jl", r)


def partial_transpose_fock(state: FockState) -> np.ndarray:
    """|n_x n_y><m_x m_y| -> |n_x m_y><m_x n_y|."""
    d = state.dim
    return state.rho.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d)


def entropy_negativity_fock(state: FockState) -> tuple[float, float, float, float]:
    """(S_x, S_y, N, <L_z>) read directly from the density matrix."""
    rx, ry = reduced_states(state)
    ev = np.linalg.eigvalsh(partial_transpose_fock(state))
    neg = 0.5 * (float(np.sum(np.abs(ev))) - 1.0)
    lz = float(np.sum(state.rho * angular_momentum_fock(state.n_max)))
    return _von_neumann(rx), _von_neumann(ry), max(neg, 0.0), lz


@dataclass(frozen=True)
class FockObservables:
    entropy_x: float
    entropy_y: float
    negativity: float
    mean_lz: float
    ground_energy: float
    mean_energy: float

    def as_tuple(self):
        return (self.entropy_x, self.entropy_y, self.negativity, self.mean_lz,
                self.ground_energy, self.mean_energy)


def fock_observables(params: ModelParams, temperature: float, config: FockConfig | None = None) -> FockObservables:
    """Observables at ``config.n_max``; with ``config.convergence`` set, both
    cutoffs are evaluated and must agree to ``config.tol``."""
    config = config or FockConfig()

    def at(n):
        st = thermal_state_fock(params, temperature, FockConfig(n))
        sx, sy, neg, lz = entropy_negativity_fock(st)
        return FockObservables(sx, sy, neg, lz, float(st.energies[0]), st.mean_energy())

    if config.convergence is None:
        return at(config.n_max)
    lo, hi = (at(n) for n in config.convergence)
    gap = max(abs(x - y) for x, y in zip(lo.as_tuple(), hi.as_tuple()))
    if gap > config.tol:
        raise ConvergenceFailure(f"cutoffs {config.convergence} differ by {gap:.3e}")
    return hi


# ------------------------------------------------------------ comparison panel


# (k_x, k_y, omega) -> temperatures; higher T only where lambda_- is large
# enough for the n_max = 40 truncation to hold the thermal tail
_STANDARD = {
    (1.0, 0.25, 0.5): (0.0, 0.1, 0.2),
    (1.0, 0.5, 0.8): (0.0, 0.2, 0.5),
    (1.5, 0.6, 0.6): (0.0, 0.2, 0.5, 1.0),
    (1.0, 0.8, 1.2): (0.0, 0.2),
    (2.0, 1.0, 0.4): (0.0, 0.2, 0.5, 1.0),
    (1.2, 0.9, 0.3): (0.0, 0.2, 0.5, 1.0),
    (1.0, 0.25, 1.0): (0.0, 0.2),
}


def standard_panel() -> list[ModelParams]:
    """24 sector-A points, lambda_- >= 0.2, T <= 1, converged at n_max = 40."""
    pts = [ModelParams.fixed_k(kx, ky, w, t)
           for (kx, ky, w), temps in _STANDARD.items() for t in temps]
    pts.append(ModelParams.fixed_kprime(1.0, 0.6, 0.4, 0.3))
    pts.append(ModelParams.fixed_kprime(2.0, 1.0, 0.5, 0.0))
    return pts


def extended_panel() -> list[ModelParams]:
    pts = standard_panel()
    for t in (0.0, 0.1, 0.2):
        pts.append(ModelParams.fixed_k(1.0, 0.3, 0.7, t))
    pts.append(ModelParams.fixed_k(1.0, 0.25, 1.0, 0.1))
    pts.append(ModelParams.fixed_k(3.0, 0.5, 1.0, 0.1))
    pts.append(ModelParams.fixed_k(1.0, 1.0, 0.5, 0.5))
    return pts


@dataclass(frozen=True)
class PanelRow:
    params: ModelParams
    gaussian: tuple[float, float, float, float, float]
    fock: tuple[float, float, float, float, float]

    NAMES = ("S_x", "S_y", "N", "Lz", "E0")

    @property
    def errors(self) -> tuple[float, ...]:
        return tuple(abs(g - f) for g, f in zip(self.gaussian, self.fock))

    def passed(self, tol: float = 1e-6) -> bool:
        return max(self.errors) <= tol


def gaussian_reference(params: ModelParams) -> tuple[float, float, float, float, float]:
    """(S_x, S_y, N, <L_z>, ground energy) from the closed forms."""
    rep = analyze(params, discord=False)
    return rep.entropy, rep.entropy_y, rep.negativity, rep.mean_lz, ground_energy_gaussian(params)


def compare_point(params: ModelParams, config: FockConfig | None = None) -> PanelRow:
    obs = fock_observables(params, params.temperature, config)
    fock = (obs.entropy_x, obs.entropy_y, obs.negativity, obs.mean_lz, obs.ground_energy)
    return PanelRow(params, gaussian_reference(params), fock)


def compare_panel(points, config: FockConfig | None = None, workers: int = 1) -> list[PanelRow]:
    if workers <= 1:
        return [compare_point(p, config) for p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda p: compare_point(p, config), points))


def ground_energy_gaussian(params: ModelParams) -> float:
    lp, lm = mode_frequencies(params)
    return 0.5 * (abs(lp) + abs(lm))
