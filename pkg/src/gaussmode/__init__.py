"""Entanglement, gaussian discord and stability of two harmonic modes
coupled through an angular momentum term."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceFailure,
    DegenerateTransform,
    GaussModeError,
    NonPhysical,
    NoBoundary,
    NotEntangledAtZero,
    OutOfSector,
    RootDiagnostic,
    SpecInvalid,
    ThermalUndefined,
    UnstableSpectrum,
)
from .model import (  # noqa: E402
    ModelParams,
    SectorClass,
    SectorTag,
    View,
    classify_sector,
    stability_boundaries,
    to_fixed_k,
    to_fixed_kprime,
)
from .spectral import NormalModeData, diagonalize, mode_frequencies  # noqa: E402
from .covariance import (  # noqa: E402
    CovarianceMatrix,
    ThermalOccupations,
    build_covariance,
    mean_angular_momentum,
    symplectic_spectrum,
    thermal_occupations,
)
from .measures import (  # noqa: E402
    EntanglementReport,
    bosonic_entropy,
    is_entangled,
    local_symplectic_eigenvalue,
    negativity,
    ppt_eigenvalues,
    vacuum_f_closed,
)
from .discord import (  # noqa: E402
    discord_high_t_asymptote,
    discord_minimization_oracle,
    gaussian_discord,
)
from .report import analyze  # noqa: E402
from .thermo import (  # noqa: E402
    LimitTemperature,
    SweepSpec,
    limit_temperature,
    run_sweep,
    te_large_omega_asymptote,
)
from .oracle import (  # noqa: E402
    FockConfig,
    FockState,
    build_hamiltonian_fock,
    entropy_negativity_fock,
    ground_state_fock,
    thermal_state_fock,
)
