"""Acceptance criteria 1-11, each at its stated tolerance and runtime bound.

Every test records one PASS/FAIL line in ``RESULTS``; the conftest hook prints
them after the run.  ``python tests/test_acceptance.py`` runs the same checks
without pytest.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_sector_a  # noqa: E402
from gaussmode.cli import phase_rows  # noqa: E402
from gaussmode.covariance import (  # noqa: E402
    build_covariance,
    covariance_at,
    mean_angular_momentum,
    symplectic_spectrum,
    thermal_occupations,
)
from gaussmode.discord import discord_high_t_asymptote, discord_minimization_oracle, gaussian_discord  # noqa: E402
from gaussmode.measures import is_entangled, local_symplectic_eigenvalue  # noqa: E402
from gaussmode.model import ModelParams, SectorTag, View, classify_sector, stability_boundaries  # noqa: E402
from gaussmode.oracle import FockConfig, compare_panel, standard_panel  # noqa: E402
from gaussmode.report import analyze  # noqa: E402
from gaussmode.spectral import (  # noqa: E402
    SYMPLECTIC_J,
    diagonalize,
    mode_frequencies,
    transformation_matrix,
)
from gaussmode.thermo import ftilde_minus_at, limit_temperature, max_limit_temperature  # noqa: E402

RESULTS: dict[int, str] = {}
SEED = 20240611


class Check:
    """Collects the worst deviation and the pass flag of one criterion."""

    def __init__(self, number, title, budget):
        self.number, self.title, self.budget = number, title, budget
        self.notes = []
        self.ok = True

    def expect(self, cond, note):
        self.notes.append(note)
        self.ok = self.ok and bool(cond)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is not None:
            self.ok = False
            self.notes.append(f"{exc_type.__name__}: {exc}")
        in_time = elapsed < self.budget
        self.ok = self.ok and in_time
        verdict = "PASS" if self.ok else "FAIL"
        line = (f"criterion {self.number:2d} {verdict}: {self.title} | "
                + "; ".join(self.notes) + f" | {elapsed:.1f}s (< {self.budget:g}s)")
        RESULTS[self.number] = line
        print(line)
        return False


def slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def random_stable(rng, n):
    out = []
    while len(out) < n:
        view = View.FIXED_K if rng.random() < 0.5 else View.FIXED_KPRIME
        kx, ky = rng.uniform(-3, 3, 2)
        w = rng.uniform(0, 3) * rng.choice([-1.0, 1.0])
        p = ModelParams(view, float(kx), float(ky), float(w))
        tag = classify_sector(p).tag
        if tag in (SectorTag.A, SectorTag.B, SectorTag.B1, SectorTag.B2):
            out.append(p)
    return out


def test_criterion_1():
    with Check(1, "max T_E, FixedK", 10) as c:
        m = max_limit_temperature(lambda w: ModelParams.fixed_k(1, 1e-8, w), 0.05, 2.0)
        c.expect(abs(m.t_max - 0.24) <= 0.01, f"T_E^M = {m.t_max:.5f}")
        c.expect(abs(m.omega_at_max - 0.38) <= 0.02, f"at omega = {m.omega_at_max:.4f}")
    assert c.ok, RESULTS[1]


def test_criterion_2():
    with Check(2, "max T_E, FixedKPrime", 10) as c:
        # omega_y' -> 0 means k'_y just above omega^2 (the stability edge)
        m = max_limit_temperature(lambda w: ModelParams.fixed_kprime(1, w * w + 1e-8, w), 0.05, 0.95)
        c.expect(abs(m.t_max - 0.23) <= 0.01, f"T_E'^M = {m.t_max:.5f}")
        c.expect(abs(m.omega_at_max - 0.28) <= 0.02, f"at omega = {m.omega_at_max:.4f}")
    assert c.ok, RESULTS[2]


def test_criterion_3():
    with Check(3, "critical-ratio saturation", 1) as c:
        want = (math.sqrt(2) - 1) / 2
        for kx in (1.0, 2.5):
            f = analyze(ModelParams.fixed_kprime(kx, -kx, 100 * math.sqrt(kx)), discord=False).f_local
            err = max(abs(v - want) for v in f)
            c.expect(err <= 1e-3, f"k'_x={kx:g}: |f - (sqrt2-1)/2| = {err:.2e}")
    assert c.ok, RESULTS[3]


def test_criterion_4():
    with Check(4, "strong-field saturation", 1) as c:
        for r in (0.1, 0.3, 0.5):
            wx, wy = 1.0, math.sqrt(r)
            wb, wg = 0.5 * (wx + wy), math.sqrt(wx * wy)
            f = analyze(ModelParams.fixed_k(1, r, 1e3), discord=False).f_local[0]
            err = abs(f - 0.5 * (wb / wg - 1))
            c.expect(err <= 1e-4, f"ky/kx={r}: {err:.2e}")
    assert c.ok, RESULTS[4]


def test_criterion_5():
    with Check(5, "divergence exponents", 30) as c:
        w1 = stability_boundaries(1, 0.25, View.FIXED_KPRIME).omega_c1
        eps = np.geomspace(1e-12, 1e-9, 10)
        f1 = [analyze(ModelParams.fixed_kprime(1, 0.25, w1 - e), discord=False).f_local[0] for e in eps]
        s1 = slope(eps, f1)
        c.expect(abs(s1 + 0.25) <= 0.02, f"omega'_c1 slope {s1:.4f}")

        w3 = stability_boundaries(1, -1.3, View.FIXED_KPRIME).omega_c3
        eps = np.geomspace(1e-9, 1e-6, 10)
        f3 = [analyze(ModelParams.fixed_kprime(1, -1.3, w3 - e), discord=False).f_local[0] for e in eps]
        s3 = slope(eps, f3)
        c.expect(abs(s3 + 0.5) <= 0.02, f"omega'_c3 slope {s3:.4f}")

        kx, ky = -1.0, -0.25
        wc = stability_boundaries(kx, ky, View.FIXED_K).omega_c
        eps = np.geomspace(1e-8, 1e-5, 12)
        lz = [abs(mean_angular_momentum(covariance_at(ModelParams.fixed_k(kx, ky, wc + e))[2])) for e in eps]
        sl = slope(eps, lz)
        c.expect(abs(sl + 0.5) <= 0.02, f"<L_z> at omega_c slope {sl:.4f}")
    assert c.ok, RESULTS[5]


@pytest.mark.slow
def test_criterion_6():
    with Check(6, "Fock oracle equivalence", 300) as c:
        panel = standard_panel()
        c.expect(len(panel) >= 20, f"{len(panel)} points")
        c.expect(all(min(mode_frequencies(p)) >= 0.05 and p.temperature <= 1 for p in panel), "lambda_- >= 0.05, T <= 1")
        rows = compare_panel(panel, FockConfig(40), workers=2)
        worst = np.max([r.errors for r in rows], axis=0)
        for name, err in zip(rows[0].NAMES, worst):
            c.expect(err <= 1e-6, f"{name} {err:.1e}")
    assert c.ok, RESULTS[6]


def test_criterion_7():
    with Check(7, "PPT consistency", 60) as c:
        rng = np.random.default_rng(SEED)
        mismatch = nonzero_above = 0
        worst_residual = 0.0
        for p in random_sector_a(rng, 1000):
            te = limit_temperature(p)
            worst_residual = max(worst_residual, te.residual)
            temps = [0.0] + [te.t_e * x for x in (0.3, 0.9, 1.05, 2.0, 10.0)]
            for t in temps:
                rep = analyze(p.with_temperature(t), discord=False)
                _, occ, _ = covariance_at(p, t)
                if is_entangled(rep.f_local, occ) != (rep.negativity > 0):
                    mismatch += 1
                if t > te.t_e and rep.negativity != 0.0:
                    nonzero_above += 1
        c.expect(mismatch == 0, f"is_entangled/N mismatches {mismatch}")
        c.expect(nonzero_above == 0, f"N != 0 above T_E: {nonzero_above}")
        c.expect(worst_residual <= 1e-10, f"worst residual {worst_residual:.1e}")
    assert c.ok, RESULTS[7]


def test_criterion_8():
    with Check(8, "symplectic identities", 30) as c:
        rng = np.random.default_rng(SEED + 1)
        worst = dict(prod=0.0, sum=0.0, symp=0.0, spec=0.0)
        for p in random_stable(rng, 10_000):
            m = diagonalize(p)
            lp, lm = m.lambda_plus, m.lambda_minus
            kx, ky = p.k
            w2 = p.omega ** 2
            worst["prod"] = max(worst["prod"], abs(lp ** 2 * lm ** 2 - kx * ky) / max(1.0, abs(kx * ky)))
            total = kx + ky + 4 * w2
            worst["sum"] = max(worst["sum"], abs(lp ** 2 + lm ** 2 - total) / max(1.0, abs(total)))
            s = transformation_matrix(m)
            worst["symp"] = max(worst["symp"], np.abs(s @ SYMPLECTIC_J @ s.T - SYMPLECTIC_J).max()
                                / max(1.0, np.abs(s).max() ** 2))
            t = float(rng.choice([0.0, 0.1, 1.0])) if m.sector is SectorTag.A else 0.0
            occ = thermal_occupations(m, t)
            got = sorted(symplectic_spectrum(build_covariance(m, occ)))
            want = sorted(occ.as_tuple())
            worst["spec"] = max(worst["spec"], max(abs(g - v) / max(1.0, v) for g, v in zip(got, want)))
        for key, label in (("prod", "l+^2 l-^2 = kx ky"), ("sum", "l+^2 + l-^2"),
                           ("symp", "S J S^T = J"), ("spec", "spectrum round trip")):
            c.expect(worst[key] <= 1e-10, f"{label} {worst[key]:.1e}")
    assert c.ok, RESULTS[8]


@pytest.mark.slow
def test_criterion_9():
    with Check(9, "gaussian discord", 300) as c:
        rng = np.random.default_rng(SEED + 2)
        samples = random_sector_a(rng, 100)
        temps = (0.05, 0.2, 1.0)
        worst_oracle = worst_low = 0.0
        implication = 0
        for i, p in enumerate(samples):
            t = temps[i % 3]
            _, occ, cov = covariance_at(p, t)
            f = (local_symplectic_eigenvalue(cov, "x"), local_symplectic_eigenvalue(cov, "y"))
            for mode in "xy":
                d = gaussian_discord(f, occ, mode)
                worst_oracle = max(worst_oracle, abs(discord_minimization_oracle(cov, mode).discord - d))
            for tt in (0.0, t):
                rep = analyze(p.with_temperature(tt))
                if max(rep.discord_x, rep.discord_y) > 1 and not rep.negativity > 0:
                    implication += 1
            vac = analyze(p)
            worst_low = max(worst_low, abs(vac.discord_x - vac.entropy), abs(vac.discord_y - vac.entropy))
        for t in (1e-2, 1e-3):
            rep = analyze(ModelParams.fixed_k(1, 0.25, 1, t))
            worst_low = max(worst_low, abs(rep.discord_x - rep.entropy), abs(rep.discord_y - rep.entropy))
        c.expect(worst_oracle <= 1e-5, f"closed vs oracle {worst_oracle:.1e}")
        c.expect(worst_low <= 1e-6, f"T->0 vs S {worst_low:.1e}")
        c.expect(implication == 0, f"D>1 without N>0: {implication}")

        worst_tail = 0.0
        for p in [ModelParams.fixed_k(1, 0.25, 1)] + samples[:20]:
            lam_p = mode_frequencies(p)[0]
            q = p.with_temperature(1e3 * lam_p)
            d = analyze(q).discord_y
            worst_tail = max(worst_tail, abs(d / discord_high_t_asymptote(q, "y") - 1))
        c.expect(worst_tail <= 1e-2, f"T D^y tail {worst_tail:.1e}")
    assert c.ok, RESULTS[9]


def test_criterion_10():
    with Check(10, "edge thermal law", 10) as c:
        p = ModelParams.fixed_k(1, 1e-12, 1.0)
        ts = np.geomspace(1e-6, 1e-4, 9)
        n = [analyze(p.with_temperature(t), discord=False).negativity for t in ts]
        s = slope(ts, n)
        c.expect(abs(s + 0.5) <= 0.05, f"N ~ T^{s:.4f}")
        c.expect(ftilde_minus_at(p, 1e-4) > -0.5, "f~_- above -1/2")
    assert c.ok, RESULTS[10]


def _tags_along(rows, ratio):
    return [(r["omega"], r["sector"]) for r in rows
            if r["ratio"] == ratio and not r["near_boundary"]]


def test_criterion_11():
    with Check(11, "phase diagram", 60) as c:
        ratios = np.round(np.linspace(-4, 2, 61), 12)
        omegas = np.linspace(0, 3, 61)
        rows_k = phase_rows(View.FIXED_K, 1.0, ratios, omegas)
        rows_p = phase_rows(View.FIXED_KPRIME, 1.0, ratios, omegas)
        bad = sum(1 for r in rows_k + rows_p if not r["near_boundary"] and r["sector"] != r["closed_sector"])
        c.expect(bad == 0, f"first-principles vs closed-form mismatches {bad} of {len(rows_k) + len(rows_p)}")

        topo_k = True
        for ratio in ratios:
            tags = _tags_along(rows_k, ratio)
            if ratio > 0:
                topo_k &= all(t == "A" for _, t in tags)
            elif ratio < 0:
                wc = stability_boundaries(-1.0, ratio, View.FIXED_K).omega_c
                topo_k &= all((t == "B") == (w > wc) for w, t in tags)
                topo_k &= all(t == "Unstable" for w, t in tags if w < wc)
        c.expect(topo_k, "FixedK: A for k_y>0, B above omega_c for k_y<0")

        topo_p = True
        wedge = 0
        for ratio in ratios:
            tags = [t for _, t in _tags_along(rows_p, ratio)]
            if 0 < ratio < 1:
                order = [t for i, t in enumerate(tags) if i == 0 or tags[i - 1] != t]
                topo_p &= order == ["A", "Unstable", "B1"]
            elif -3 < ratio < -1:
                b2 = [i for i, t in enumerate(tags) if t == "B2"]
                if b2:
                    wedge += 1
                    topo_p &= b2 == list(range(b2[0], b2[-1] + 1)) and b2[-1] < len(tags) - 1
        c.expect(topo_p, "FixedKPrime: A / band / B1 ordering")
        c.expect(wedge > 0, f"B2 wedge bounded above on {wedge} ratios")
    assert c.ok, RESULTS[11]


if __name__ == "__main__":
    failed = 0
    for n in range(1, 12):
        try:
            globals()[f"test_criterion_{n}"]()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
