"""Physical parametrization and dynamical-stability sectors.

Two views of the same Hamiltonian are supported.  ``FIXED_K`` holds the
potential constants ``k_mu`` fixed (charged particle in a magnetic field);
``FIXED_KPRIME`` holds the rotating-frame constants ``k'_mu = k_mu + omega**2``
fixed (particle in a rotating trap).  All dimensionless, hbar = Omega_0 = 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .errors import NoBoundary

#: relative distance below which a point counts as lying on a sector boundary
BOUNDARY_RTOL = 1e-12

#: |omega| below which omega^2 underflows and the modes count as decoupled
OMEGA_FLOOR = 2.0 ** -511


def effective_omega(omega: float) -> float:
    """``omega``, or 0.0 when its square is not a normal double."""
    return 0.0 if abs(omega) < OMEGA_FLOOR else omega


class View(str, enum.Enum):
    FIXED_K = "fixedk"
    FIXED_KPRIME = "fixedkprime"


class SectorTag(str, enum.Enum):
    A = "A"
    B = "B"
    B1 = "B1"
    B2 = "B2"
    LANDAU = "Landau"
    UNSTABLE = "Unstable"
    DEGENERATE = "Degenerate"

    @property
    def stable(self) -> bool:
        return self in (SectorTag.A, SectorTag.B, SectorTag.B1, SectorTag.B2, SectorTag.LANDAU)


@dataclass(frozen=True)
class ModelParams:
    """One parameter point.

    ``kx``/``ky`` are ``k_mu`` when ``view`` is FIXED_K and ``k'_mu`` when it
    is FIXED_KPRIME.
    """

    view: View
    kx: float
    ky: float
    omega: float
    temperature: float = 0.0
    # set by view conversions so the inverse map is bit-exact
    _origin: "ModelParams | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "view", View(self.view))
        for name in ("kx", "ky", "omega", "temperature"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature!r}")

    @classmethod
    def fixed_k(cls, kx, ky, omega, temperature=0.0):
        return cls(View.FIXED_K, float(kx), float(ky), float(omega), float(temperature))

    @classmethod
    def fixed_kprime(cls, kx, ky, omega, temperature=0.0):
        return cls(View.FIXED_KPRIME, float(kx), float(ky), float(omega), float(temperature))

    @property
    def kprime(self) -> tuple[float, float]:
        if self.view is View.FIXED_KPRIME:
            return self.kx, self.ky
        w2 = self.omega * self.omega
        return self.kx + w2, self.ky + w2

    @property
    def k(self) -> tuple[float, float]:
        if self.view is View.FIXED_K:
            return self.kx, self.ky
        w2 = self.omega * self.omega
        return self.kx - w2, self.ky - w2

    @property
    def isotropic(self) -> bool:
        return self.kx == self.ky

    def with_omega(self, omega: float) -> "ModelParams":
        return replace(self, omega=float(omega), _origin=None)

    def with_temperature(self, temperature: float) -> "ModelParams":
        return replace(self, temperature=float(temperature), _origin=None)

    def swapped(self) -> "ModelParams":
        """Relabel x <-> y; L_z changes sign so omega does too."""
        return replace(self, kx=self.ky, ky=self.kx, omega=-self.omega, _origin=None)


def to_fixed_kprime(params: ModelParams) -> ModelParams:
    if params.view is View.FIXED_KPRIME:
        return params
    if params._origin is not None and params._origin.view is View.FIXED_KPRIME:
        return params._origin
    kpx, kpy = params.kprime
    return ModelParams(View.FIXED_KPRIME, kpx, kpy, params.omega, params.temperature, params)


def to_fixed_k(params: ModelParams) -> ModelParams:
    if params.view is View.FIXED_K:
        return params
    if params._origin is not None and params._origin.view is View.FIXED_K:
        return params._origin
    kx, ky = params.k
    return ModelParams(View.FIXED_K, kx, ky, params.omega, params.temperature, params)


@dataclass(frozen=True)
class Boundaries:
    """Closed-form critical frequencies; ``None`` where not applicable.

    ``omega_low`` is the lower edge sqrt(k'_+) of the one-axis repulsive
    window and ``omega_c3`` its upper edge (``inf`` when unbounded).
    """

    omega_c: float | None = None
    omega_c1: float | None = None
    omega_c2: float | None = None
    omega_c3: float | None = None
    omega_low: float | None = None

    def empty(self) -> bool:
        return all(v is None for v in (self.omega_c, self.omega_c1, self.omega_c2, self.omega_c3, self.omega_low))

    def values(self) -> list[float]:
        return [v for v in (self.omega_c, self.omega_c1, self.omega_c2, self.omega_c3, self.omega_low)
                if v is not None and math.isfinite(v)]


@dataclass(frozen=True)
class SectorClass:
    tag: SectorTag
    boundaries: Boundaries
    near_boundary: bool = False


def _boundaries(kx: float, ky: float, view: View) -> Boundaries:
    view = View(view)
    if view is View.FIXED_K:
        if kx < 0 and ky < 0:
            return Boundaries(omega_c=0.5 * (math.sqrt(-kx) + math.sqrt(-ky)))
        return Boundaries()
    if kx > 0 and ky > 0:
        rx, ry = math.sqrt(kx), math.sqrt(ky)
        return Boundaries(omega_c1=min(rx, ry), omega_c2=max(rx, ry))
    if kx * ky < 0:
        kpos, kneg = (kx, ky) if kx > 0 else (ky, kx)
        if kneg >= -kpos:
            return Boundaries(omega_low=math.sqrt(kpos), omega_c3=math.inf)
        if kneg > -3 * kpos:
            # positive root of Delta(omega) = 0
            upper = (kpos - kneg) / math.sqrt(8 * abs(kpos + kneg))
            return Boundaries(omega_low=math.sqrt(kpos), omega_c3=upper)
    return Boundaries()


def stability_boundaries(kx: float, ky: float, view: View) -> Boundaries:
    """Critical frequencies for the given constants.

    FIXED_K with both k < 0 gives omega_c; FIXED_KPRIME with both k' > 0 gives
    omega'_c1 and omega'_c2; FIXED_KPRIME with one negative constant gives the
    window [sqrt(k'_+), omega'_c3).  Any other sign combination raises
    :class:`NoBoundary`.
    """
    b = _boundaries(float(kx), float(ky), view)
    if b.empty():
        raise NoBoundary(f"no critical frequency for kx={kx}, ky={ky} in view {View(view).value}")
    return b


def sector_from_boundaries(params: ModelParams) -> SectorTag:
    """Sector read off the closed-form boundary inequalities alone."""
    kx, ky, w = params.kx, params.ky, abs(params.omega)
    b = _boundaries(kx, ky, params.view)
    if params.view is View.FIXED_K:
        if kx > 0 and ky > 0:
            return SectorTag.A
        if kx == 0 and ky == 0 and w != 0:
            return SectorTag.LANDAU
        if b.omega_c is not None:
            return SectorTag.B if w > b.omega_c else SectorTag.UNSTABLE
        return SectorTag.UNSTABLE
    if kx > 0 and ky > 0:
        if kx == ky == w * w:
            return SectorTag.LANDAU
        if w < b.omega_c1:
            return SectorTag.A
        if w > b.omega_c2:
            return SectorTag.B1
        return SectorTag.UNSTABLE
    if b.omega_low is not None:
        return SectorTag.B2 if b.omega_low < w < b.omega_c3 else SectorTag.UNSTABLE
    return SectorTag.UNSTABLE


def scaled_delta2(d: float, w: float, s: float) -> tuple[float, float, float]:
    """Delta^2 = d^2/4 + 2 w^2 s in units of ``unit``^2, plus its term-wise scale.

    Returns (unit, Delta^2 / unit^2, |terms| / unit^2); the rescaling keeps
    Delta > 0 representable when omega^2 alone would underflow.
    """
    half = 0.5 * abs(d)
    unit = max(half, abs(w))
    if unit == 0:
        return 0.0, 0.0, 0.0
    a, b = half / unit, w / unit
    return unit, a * a + 2.0 * b * b * s, a * a + 2.0 * b * b * abs(s)


def classify_sector(params: ModelParams) -> SectorClass:
    """First-principles stability classification.

    Evaluates Delta^2, the normal-mode frequencies squared and the signs of
    the P'^2 / Q'^2 coefficients.  Delta^2 within ``BOUNDARY_RTOL`` of zero
    counts as degenerate; lambda_-^2 within ``BOUNDARY_RTOL`` of zero keeps
    the tag implied by its sign and is flagged.
    """
    kpx, kpy = params.kprime
    kx, ky = params.k
    w = abs(effective_omega(params.omega))
    w2 = w * w
    s = kpx + kpy
    d = abs(kpx - kpy)
    bounds = _boundaries(params.kx, params.ky, params.view)

    near = False

    def result(tag, flag=None):
        return SectorClass(tag, bounds, near if flag is None else flag)

    unit, delta2, scale = scaled_delta2(d, w, s)
    if w != 0 and abs(delta2) <= BOUNDARY_RTOL * scale:
        return result(SectorTag.DEGENERATE, True)
    if delta2 < 0:
        return result(SectorTag.UNSTABLE)
    delta = unit * math.sqrt(delta2)
    c = 0.5 * s + w2
    lp2 = c + delta
    if lp2 <= 0:
        return result(SectorTag.UNSTABLE)
    lm2 = kx * ky / lp2
    if lm2 == 0:
        if w == 0:
            return result(SectorTag.UNSTABLE, True)
        # zero mode; exact Landau point only when isotropic
        return result(SectorTag.LANDAU, not (kx == 0 and ky == 0))
    # close to a zero mode: keep the tag implied by the sign, flag it
    near = abs(lm2) <= BOUNDARY_RTOL * lp2
    if lm2 < 0:
        return result(SectorTag.UNSTABLE)

    if delta == 0:
        # omega = 0, isotropic: decoupled oscillators with lm2 > 0
        return result(SectorTag.A)
    g_over_w = 2.0 * s / (2.0 * delta + d)
    alpha_m = 1.0 - (w2 / delta) * (g_over_w + 1.0)
    beta_m = delta * (g_over_w - 1.0)
    alpha_p = 1.0 - (w2 / delta) * (g_over_w - 1.0)
    beta_p = delta * (g_over_w + 1.0)
    if min(alpha_p, alpha_m, beta_p, beta_m) > 0:
        return result(SectorTag.A)
    if params.view is View.FIXED_K:
        return result(SectorTag.B)
    if kpx > 0 and kpy > 0:
        return result(SectorTag.B1)
    if kpx * kpy < 0 or (kpx == 0) != (kpy == 0):
        return result(SectorTag.B2)
    return result(SectorTag.B)
