import math
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gaussmode.model import ModelParams, stability_boundaries

settings.register_profile(
    "default", max_examples=200, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# keep the sweep thread pool deterministic and small in tests
os.environ.setdefault("GAUSSMODE_THREADS", "2")

pos = st.floats(0.05, 3.0)
neg = st.floats(-3.0, -0.05)
frac = st.floats(0.05, 0.95)


@st.composite
def sector_a(draw, view="fixedk", signed=True):
    """Points in the positive definite sector A."""
    if view == "fixedk":
        kx, ky = draw(pos), draw(pos)
        w = draw(st.floats(0.0, 3.0))
        p = ModelParams.fixed_k(kx, ky, w)
    else:
        kx, ky = draw(pos), draw(pos)
        w = draw(frac) * math.sqrt(min(kx, ky))
        p = ModelParams.fixed_kprime(kx, ky, w)
    if signed and draw(st.booleans()):
        p = p.with_omega(-p.omega)
    return p


@st.composite
def sector_b(draw):
    kx, ky = draw(neg), draw(neg)
    wc = stability_boundaries(kx, ky, "fixedk").omega_c
    return ModelParams.fixed_k(kx, ky, wc * draw(st.floats(1.05, 3.0)))


@st.composite
def sector_b1(draw):
    kx, ky = draw(pos), draw(pos)
    hi = math.sqrt(max(kx, ky))
    return ModelParams.fixed_kprime(kx, ky, hi * draw(st.floats(1.05, 3.0)))


@st.composite
def sector_b2(draw):
    kx = draw(pos)
    ky = -kx * draw(st.floats(0.1, 2.9))
    b = stability_boundaries(kx, ky, "fixedkprime")
    top = b.omega_c3 if math.isfinite(b.omega_c3) else 4 * b.omega_low
    w = b.omega_low + (top - b.omega_low) * draw(st.floats(0.05, 0.95))
    return ModelParams.fixed_kprime(kx, ky, w)


stable_point = st.one_of(sector_a(), sector_a("fixedkprime"), sector_b(), sector_b1(), sector_b2())
temperatures = st.sampled_from([0.0, 0.1, 1.0, 10.0])


def random_sector_a(rng: np.random.Generator, n: int) -> list[ModelParams]:
    """Deterministic bulk samples for the acceptance criteria."""
    out = []
    for _ in range(n):
        kx, ky = rng.uniform(0.05, 3.0, 2)
        w = rng.uniform(0.01, 3.0) * rng.choice([-1.0, 1.0])
        out.append(ModelParams.fixed_k(kx, ky, w))
    return out


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
