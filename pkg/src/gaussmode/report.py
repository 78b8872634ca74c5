"""One-call evaluation of every correlation measure at a parameter point."""
from __future__ import annotations

from .covariance import covariance_at, mean_angular_momentum
from .discord import gaussian_discord
from .errors import OutOfSector, ThermalUndefined
from .measures import (
    EntanglementReport,
    bosonic_entropy,
    local_symplectic_eigenvalue,
    negativity,
    omega_averages,
    ppt_from_occupations,
    vacuum_f_closed,
)
from .model import ModelParams, SectorTag, classify_sector


def analyze(params: ModelParams, discord: bool = True) -> EntanglementReport:
    """Full report.  Raises OutOfSector at unstable or degenerate points and
    ThermalUndefined for T > 0 outside sector A."""
    cls = classify_sector(params)
    if not cls.tag.stable:
        raise OutOfSector(f"no stationary state in sector {cls.tag.value}")
    if params.temperature > 0 and cls.tag is not SectorTag.A:
        raise ThermalUndefined(f"thermal state needs sector A, got {cls.tag.value}")
    modes, occ, cov = covariance_at(params)
    f_local = None
    if params.temperature == 0:
        # closed vacuum form: exact zero at isotropy, no sqrt(eps) noise near it
        try:
            f0 = vacuum_f_closed(params)
            f_local = (f0, f0)
        except OutOfSector:
            pass
    if f_local is None:
        f_local = (local_symplectic_eigenvalue(cov, "x"), local_symplectic_eigenvalue(cov, "y"))
    f_tilde = ppt_from_occupations(f_local, occ)
    try:
        bars = omega_averages(params)
    except OutOfSector:
        bars = None
    d_x = d_y = None
    if discord:
        d_x = gaussian_discord(f_local, occ, "x")
        d_y = gaussian_discord(f_local, occ, "y")
    return EntanglementReport(
        params=params,
        sector=cls.tag,
        f_local=f_local,
        f_prime=occ.as_tuple(),
        f_tilde=f_tilde,
        entropy=bosonic_entropy(f_local[0]),
        entropy_y=bosonic_entropy(f_local[1]),
        negativity=negativity(f_tilde[1]),
        mean_lz=mean_angular_momentum(cov),
        omega_bars=bars,
        discord_x=d_x,
        discord_y=d_y,
        near_boundary=cls.near_boundary or modes.near_boundary,
    )
