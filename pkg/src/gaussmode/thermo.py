"""Entanglement limit temperature and parameter sweeps."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import (
    GaussModeError,
    NotEntangledAtZero,
    RootDiagnostic,
    SpecInvalid,
    ThermalUndefined,
)
from .model import ModelParams, SectorTag, View, classify_sector, to_fixed_k
from .report import analyze

_DOUBLING_CAP = 60
_XTOL = 1e-12
_RESIDUAL_TOL = 1e-10
_SCAN_POINTS = 64


@dataclass(frozen=True)
class LimitTemperature:
    t_e: float
    bracket: tuple[float, float]
    residual: float
    exact_zero: bool = False
    iterations: int = 0


def ftilde_minus_at(params: ModelParams, temperature: float) -> float:
    """g(T): smaller PPT eigenvalue of the thermal state (kernel path)."""
    kpx, kpy = params.kprime
    return _kernels.ftilde_minus(kpx, kpy, params.omega, temperature)


def limit_temperature(params: ModelParams, strict: bool = False) -> LimitTemperature:
    """Solve g(T_E) = 0 by bracketing and bisection.

    A separable vacuum (isotropic, omega = 0, or numerically unentangled)
    yields ``exact_zero``; with ``strict`` it raises NotEntangledAtZero.
    """
    cls = classify_sector(params)
    if cls.tag is not SectorTag.A:
        raise ThermalUndefined(f"limit temperature needs sector A, got {cls.tag.value}")
    kpx, kpy = params.kprime
    w = abs(params.omega)

    def zero(reason):
        if strict:
            raise NotEntangledAtZero(reason)
        return LimitTemperature(0.0, (0.0, 0.0), 0.0, True)

    if w == 0 or kpx == kpy:
        return zero("separable vacuum")
    lp2 = 0.5 * (kpx + kpy) + w * w + math.sqrt(0.25 * (kpx - kpy) ** 2 + 2 * w * w * (kpx + kpy))
    kx, ky = params.k
    lam_p, lam_m = math.sqrt(lp2), math.sqrt(kx * ky / lp2)
    lo = 1e-6 * lam_m
    g_lo = _kernels.ftilde_minus(kpx, kpy, w, lo)
    if not g_lo < 0:
        return zero("vacuum not entangled within rounding")
    hi = lam_p
    for _ in range(_DOUBLING_CAP):
        if _kernels.ftilde_minus(kpx, kpy, w, hi) > 0:
            break
        hi *= 2.0
    else:
        return zero("no separable temperature found")
    xtol = min(_XTOL, 1e-12 * hi)
    t_e, iters = _kernels.bisect_root(kpx, kpy, w, lo, hi, xtol, 400)
    residual = abs(_kernels.ftilde_minus(kpx, kpy, w, t_e))
    if residual > _RESIDUAL_TOL:
        raise RootDiagnostic(f"residual {residual:.3e} at T_E = {t_e!r}")
    below = _kernels.ftilde_minus(kpx, kpy, w, t_e * (1 - 1e-3))
    above = _kernels.ftilde_minus(kpx, kpy, w, t_e * (1 + 1e-3))
    if not (below < 0 <= above):
        raise RootDiagnostic(f"no sign change across T_E = {t_e!r}")
    for t in np.linspace(t_e, 10 * t_e, _SCAN_POINTS + 1)[1:]:
        if _kernels.ftilde_minus(kpx, kpy, w, float(t)) < 0:
            raise RootDiagnostic(f"entangled again at T = {t!r} > T_E = {t_e!r}")
    return LimitTemperature(t_e, (lo, hi), residual, False, iters)


def te_large_omega_asymptote(params: ModelParams) -> float:
    """omega_x omega_y / (2 omega ln((omega_x + omega_y)/(omega_x - omega_y)))."""
    kx, ky = to_fixed_k(params).k if params.view is View.FIXED_KPRIME else params.k
    if not 0 < ky < kx:
        raise ValueError("needs 0 < omega_y < omega_x; swap labels first")
    wx, wy = math.sqrt(kx), math.sqrt(ky)
    return wx * wy / (2.0 * abs(params.omega) * math.log((wx + wy) / (wx - wy)))


def te_edge_relation(params: ModelParams, t_e: float) -> float:
    """Right-hand side of the transcendental T_E relation valid for omega_y -> 0."""
    kx = params.k[0]
    w2 = params.omega ** 2
    lam_p = math.sqrt(4 * w2 + kx)
    fp = 1.0 / math.expm1(lam_p / t_e)
    a = 1 + 2 * fp
    return 2 * a * w2 * kx * lam_p / (a * a * lam_p ** 4 - kx * kx)


@dataclass(frozen=True)
class LimitMaximum:
    t_max: float
    omega_at_max: float


def max_limit_temperature(family, omega_lo: float, omega_hi: float, samples: int = 64) -> LimitMaximum:
    """Maximise T_E over omega for a one-parameter family ``family(omega)``.

    Coarse scan followed by bounded scalar refinement around the best sample.
    """
    grid = np.linspace(omega_lo, omega_hi, samples)

    def te(w):
        return limit_temperature(family(float(w))).t_e

    values = [te(w) for w in grid]
    i = int(np.argmax(values))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, samples - 1)]
    res = minimize_scalar(lambda w: -te(w), bounds=(a, b), method="bounded",
                          options={"xatol": 1e-7})
    if -res.fun >= values[i]:
        return LimitMaximum(float(-res.fun), float(res.x))
    return LimitMaximum(float(values[i]), float(grid[i]))


# ---------------------------------------------------------------- sweeps

AXES = ("omega", "temperature", "ky_ratio")

OUTPUTS = ("sector", "f", "fp", "ft", "S", "N", "Dx", "Dy", "Lz", "TE")
_ALIASES = {"f'": "fp", "f~": "ft", "f̃": "ft", "D^x": "Dx", "D^y": "Dy", "T_E": "TE", "<Lz>": "Lz"}

COLUMNS = {
    "sector": ("sector", "near_boundary"),
    "f": ("f_x", "f_y"),
    "fp": ("fp_plus", "fp_minus"),
    "ft": ("ft_plus", "ft_minus"),
    "S": ("S_x", "S_y"),
    "N": ("N",),
    "Dx": ("D_x",),
    "Dy": ("D_y",),
    "Lz": ("Lz",),
    "TE": ("T_E",),
}


def normalize_outputs(outputs) -> tuple[str, ...]:
    out = []
    for name in outputs:
        key = _ALIASES.get(name, name)
        if key not in COLUMNS:
            raise SpecInvalid(f"unknown output {name!r}")
        if key not in out:
            out.append(key)
    if not out:
        raise SpecInvalid("empty output set")
    # canonical order keeps the schema independent of flag order
    return tuple(k for k in OUTPUTS if k in out)


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    lo: float
    hi: float
    samples: int
    base: ModelParams
    outputs: tuple[str, ...] = field(default=OUTPUTS)
    log: bool = False

    def __post_init__(self):
        if self.axis not in AXES:
            raise SpecInvalid(f"axis must be one of {AXES}, got {self.axis!r}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or not self.lo < self.hi:
            raise SpecInvalid(f"bad range [{self.lo}, {self.hi}]")
        if self.samples < 2:
            raise SpecInvalid("samples must be >= 2")
        if self.log and self.lo <= 0:
            raise SpecInvalid("log grid needs lo > 0")
        if self.axis == "temperature" and self.lo < 0:
            raise SpecInvalid("temperature must be >= 0")
        object.__setattr__(self, "outputs", normalize_outputs(self.outputs))

    def grid(self) -> np.ndarray:
        if self.log:
            return np.geomspace(self.lo, self.hi, self.samples)
        return np.linspace(self.lo, self.hi, self.samples)

    def point(self, value: float) -> ModelParams:
        if self.axis == "omega":
            return self.base.with_omega(value)
        if self.axis == "temperature":
            return self.base.with_temperature(value)
        return ModelParams(self.base.view, self.base.kx, value * self.base.kx,
                           self.base.omega, self.base.temperature)

    def columns(self) -> tuple[str, ...]:
        return (self.axis,) + tuple(c for k in self.outputs for c in COLUMNS[k])


def evaluate_row(params: ModelParams, outputs) -> dict:
    """Requested columns at one point; nulls (None) where undefined."""
    outputs = normalize_outputs(outputs)
    row = {c: None for k in outputs for c in COLUMNS[k]}
    cls = classify_sector(params)
    if "sector" in outputs:
        row["sector"] = cls.tag.value
        row["near_boundary"] = cls.near_boundary
    try:
        rep = analyze(params, discord=("Dx" in outputs or "Dy" in outputs))
    except GaussModeError:
        return row
    if "sector" in outputs:
        row["near_boundary"] = rep.near_boundary
    values = {
        "f_x": rep.f_local[0], "f_y": rep.f_local[1],
        "fp_plus": rep.f_prime[0], "fp_minus": rep.f_prime[1],
        "ft_plus": rep.f_tilde[0], "ft_minus": rep.f_tilde[1],
        "S_x": rep.entropy, "S_y": rep.entropy_y,
        "N": rep.negativity, "D_x": rep.discord_x, "D_y": rep.discord_y,
        "Lz": rep.mean_lz,
    }
    for k in outputs:
        if k in ("sector", "TE"):
            continue
        for c in COLUMNS[k]:
            row[c] = values[c]
    if "TE" in outputs and rep.sector is SectorTag.A:
        try:
            row["T_E"] = limit_temperature(params.with_temperature(0.0)).t_e
        except GaussModeError:
            pass
    return row


def worker_count() -> int:
    raw = os.environ.get("GAUSSMODE_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def parallel_map(fn, items, workers: int | None = None) -> list:
    """``[fn(x) for x in items]`` spread over threads, results in input order."""
    items = list(items)
    n = min(workers or worker_count(), max(len(items), 1))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[dict]:
    """One row per grid value, in grid order regardless of scheduling."""

    def job(value):
        row = {spec.axis: float(value)}
        row.update(evaluate_row(spec.point(float(value)), spec.outputs))
        return row

    return parallel_map(job, spec.grid(), workers)
