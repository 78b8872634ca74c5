import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import neg, pos, sector_a, stable_point
from gaussmode.errors import NoBoundary
from gaussmode.model import (
    ModelParams,
    SectorTag,
    View,
    classify_sector,
    sector_from_boundaries,
    stability_boundaries,
    to_fixed_k,
    to_fixed_kprime,
)


class TestViewConversion:
    def test_fixed_k_to_kprime(self):
        p = to_fixed_kprime(ModelParams.fixed_k(1, 0.25, 1))
        assert p.view is View.FIXED_KPRIME
        assert (p.kx, p.ky, p.omega) == (2.0, 1.25, 1.0)

    def test_landau_maps_to_equal_kprime(self):
        p = to_fixed_kprime(ModelParams.fixed_k(0, 0, 0.7))
        assert p.kx == p.ky == 0.7 ** 2

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 5))
    def test_round_trip_bit_exact(self, kx, ky, w, t):
        p = ModelParams.fixed_k(kx, ky, w, t)
        assert to_fixed_k(to_fixed_kprime(p)) == p
        q = ModelParams.fixed_kprime(kx, ky, w, t)
        assert to_fixed_kprime(to_fixed_k(q)) == q

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    def test_kprime_relation(self, kx, ky, w):
        p = to_fixed_kprime(ModelParams.fixed_k(kx, ky, w))
        assert p.kx == kx + w * w and p.ky == ky + w * w

    def test_conversion_idempotent(self):
        p = ModelParams.fixed_kprime(1, 2, 0.3)
        assert to_fixed_kprime(p) is p

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            ModelParams.fixed_k(bad, 1, 1)

    def test_rejects_negative_temperature(self):
        with pytest.raises(ValueError):
            ModelParams.fixed_k(1, 1, 1, -0.1)


class TestExamples:
    def test_attractive_is_a(self):
        assert classify_sector(ModelParams.fixed_k(1, 0.25, 0.5)).tag is SectorTag.A

    def test_repulsive_stabilized(self):
        c = classify_sector(ModelParams.fixed_k(-1, -1, 1.5))
        assert c.tag is SectorTag.B
        assert c.boundaries.omega_c == 1.0

    def test_b2_window(self):
        c = classify_sector(ModelParams.fixed_kprime(1, -1.3, 1.2))
        assert c.tag is SectorTag.B2
        # independent: positive root of Delta^2(omega) = 0 by bracketing
        from scipy.optimize import brentq
        root = brentq(lambda w: 0.25 * 2.3 ** 2 + 2 * w * w * (1 - 1.3), 1.0, 3.0)
        assert c.boundaries.omega_c3 == pytest.approx(root, rel=1e-12)
        assert c.boundaries.omega_c3 == pytest.approx(1.4846, abs=1e-4)

    def test_landau_equivalent(self):
        c = classify_sector(ModelParams.fixed_kprime(1, 1, 1))
        assert c.tag is SectorTag.LANDAU and not c.near_boundary

    def test_boundaries_fixed_k(self):
        assert stability_boundaries(-1, -0.25, View.FIXED_K).omega_c == 0.75

    def test_boundaries_fixed_kprime(self):
        b = stability_boundaries(1, 0.25, View.FIXED_KPRIME)
        assert (b.omega_c1, b.omega_c2) == (0.5, 1.0)

    def test_boundaries_b2(self):
        b = stability_boundaries(1, -1.3, View.FIXED_KPRIME)
        assert b.omega_low == 1.0
        assert b.omega_c3 == pytest.approx(2.3 / math.sqrt(8 * 0.3), rel=1e-15)
        # lambda_-^2 vanishes at the lower edge
        p = ModelParams.fixed_kprime(1, -1.3, 1.0)
        assert p.k[0] == 0.0

    @pytest.mark.parametrize("kx,ky,view", [(1, 1, View.FIXED_K), (-1, -1, View.FIXED_KPRIME),
                                            (1, -4, View.FIXED_KPRIME)])
    def test_no_boundary(self, kx, ky, view):
        with pytest.raises(NoBoundary):
            stability_boundaries(kx, ky, view)

    def test_degenerate(self):
        # Delta = 0 at the upper edge of the B2 window
        b = stability_boundaries(1, -1.3, View.FIXED_KPRIME)
        c = classify_sector(ModelParams.fixed_kprime(1, -1.3, b.omega_c3))
        assert c.tag is SectorTag.DEGENERATE and c.near_boundary

    def test_near_zero_mode_keeps_sign_tag(self):
        c = classify_sector(ModelParams.fixed_k(1, 1e-12, 1))
        assert c.tag is SectorTag.A and c.near_boundary


class TestProperties:
    @given(pos, pos, st.floats(-20, 20))
    def test_positive_k_always_a(self, kx, ky, w):
        assert classify_sector(ModelParams.fixed_k(kx, ky, w)).tag is SectorTag.A

    @given(stable_point)
    def test_omega_sign_invariance(self, p):
        assert classify_sector(p).tag is classify_sector(p.with_omega(-p.omega)).tag

    @given(stable_point)
    def test_swap_invariance(self, p):
        assert classify_sector(p).tag is classify_sector(p.swapped()).tag

    @given(neg, neg, st.floats(0, 5))
    def test_fixed_k_repulsive_split(self, kx, ky, w):
        wc = stability_boundaries(kx, ky, View.FIXED_K).omega_c
        c = classify_sector(ModelParams.fixed_k(kx, ky, w))
        if abs(w - wc) > 1e-9:
            assert c.tag is (SectorTag.B if w > wc else SectorTag.UNSTABLE)

    def test_fixed_kprime_grid_agrees_with_closed_form(self):
        kx, ky = 1.0, 0.3
        b = stability_boundaries(kx, ky, View.FIXED_KPRIME)
        for w in np.linspace(0.001, 2.5, 1000):
            p = ModelParams.fixed_kprime(kx, ky, w)
            tag = classify_sector(p).tag
            assert tag is sector_from_boundaries(p)
            expected = (SectorTag.A if w < b.omega_c1 else
                        SectorTag.B1 if w > b.omega_c2 else SectorTag.UNSTABLE)
            assert tag is expected

    @given(pos, st.floats(4.0, 50.0))
    def test_critical_ratio_unbounded_b2(self, kx, scale):
        w = math.sqrt(kx) * scale / 3.9 + math.sqrt(kx) * 1.01
        c = classify_sector(ModelParams.fixed_kprime(kx, -kx, w))
        assert c.tag is SectorTag.B2
        assert c.boundaries.omega_c3 == math.inf

    @given(sector_a())
    def test_first_principles_matches_closed_form(self, p):
        assert sector_from_boundaries(p) is classify_sector(p).tag
