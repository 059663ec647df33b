"""Acceptance gate: nine end-to-end checks, each printing one PASS/FAIL line."""

import math
import time

import numpy as np

from semitree import (
    TreeParams,
    closed_form,
    endpoints,
    eigen_residual,
    generalized_kernel_eigen_test,
    hitting_F,
    homogeneous_spherical,
    kernel_power_eigen_test,
    lp_partial_sums,
    lp_range_of_spherical,
    membership,
    monte_carlo_hitting,
    F_series,
    sigma_p,
    spectral_radius,
    split_exponent,
    non_ellipticity_residual,
    gamma_squared_of_z,
    boundary_curve,
)
from semitree.spectra import abs_B
from semitree.verify import (
    cut_gammas,
    identity_residuals,
    rel_err,
    sample_gammas,
    special_gammas,
    triple_agreement,
)

PAIRS = [TreeParams(*q) for q in [(2, 2), (2, 3), (3, 5), (5, 2), (2, 7)]]
P_GRID = [1, 1.2, 1.5, 2, 3, 6, math.inf]


class Clock:
    def __init__(self, limit):
        self.limit = limit
        self.start = time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.2f} s, limit {self.limit} s"


def test_triple_evaluator_agreement(criterion):
    with criterion(1, "triple-evaluator agreement, n <= 40, 200 gamma per pair") as info:
        clock = Clock(5.0)
        worst = max(triple_agreement(P, sample_gammas(P, 200, seed=11)) for P in PAIRS)
        info["detail"] = f"worst rel dev {worst:.1e}"
        assert worst <= 1e-9
        clock.check()


def test_vertex_level_eigen_equation(criterion):
    with criterion(2, "vertex-level eigen-equation on the depth-12 ball") as info:
        clock = Clock(10.0)
        worst = 0.0
        for P in PAIRS:
            e = endpoints(P)
            special = [0.0, e.a, -e.a, e.b, -e.b]
            gam = np.concatenate([
                sample_gammas(P, 35, seed=12),
                cut_gammas(P, 10, seed=13),
                np.array(special, dtype=complex),
            ])
            assert gam.size == 50
            worst = max(worst, float(np.max(eigen_residual(P, gam, 12))))
        info["detail"] = f"worst residual {worst:.1e}"
        assert worst <= 1e-10
        clock.check()


def test_hitting_probabilities(criterion):
    with criterion(3, "hitting probabilities: Monte Carlo and series") as info:
        clock = Clock(20.0)
        worst_sigma, worst_series = 0.0, 0.0
        for P in PAIRS:
            for sign in (1, -1):
                exact = hitting_F(P, 1.0, sign).real
                mc = monte_carlo_hitting(P, sign, 100_000, seed=7)
                worst_sigma = max(worst_sigma, abs(mc.estimate - exact) / mc.stderr)
                s = F_series(P, sign, 2.0, 200)
                worst_series = max(worst_series, abs(s.partial_sum - hitting_F(P, 2.0, sign)))
        five_two = TreeParams(5, 2)
        assert abs(hitting_F(five_two, 1.0, 1) - 0.25) < 1e-15
        assert abs(hitting_F(five_two, 1.0, -1) - 0.4) < 1e-15
        info["detail"] = f"worst {worst_sigma:.2f} sigma, series err {worst_series:.1e}"
        assert worst_sigma <= 3.0
        assert worst_series <= 1e-8
        clock.check()


def test_algebraic_identities(criterion):
    with criterion(4, "algebraic identities on 500 gamma") as info:
        clock = Clock(1.0)
        worst = {}
        for P in PAIRS:
            for k, v in identity_residuals(P, sample_gammas(P, 100, seed=14)).items():
                worst[k] = max(worst.get(k, 0.0), v)
        info["detail"] = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
        assert max(worst.values()) <= 1e-10
        clock.check()


def test_spectral_geometry(criterion):
    with criterion(5, "spectral geometry of the lp spectra") as info:
        clock = Clock(2.0)
        foci = radius = ellip = modulus = 0.0
        for P in PAIRS:
            e = endpoints(P)
            expected = ((P.q_plus - P.q_minus) / ((P.q_plus + 1) * (P.q_minus + 1))) ** 2
            for p in P_GRID:
                lo, hi = sigma_p(P, p).foci
                foci = max(foci, abs(lo - e.a ** 2), abs(hi - e.b ** 2))
                ellip = max(ellip, abs(non_ellipticity_residual(P, p) - expected))
                # our branch has |B| <= 1; 1/|B| is |B| on the other determination
                c = abs(1 - 2 / p)
                for g in boundary_curve(P, p, 64).points():
                    modulus = max(modulus, abs(1 / abs_B(P, g) - P.qbar ** c))
            radius = max(radius, abs(spectral_radius(P, 1) - 1),
                         abs(spectral_radius(P, math.inf) - 1))
            assert abs(spectral_radius(P, 2) - e.b) <= 1e-14
        info["detail"] = (f"foci {foci:.1e}, rho_1/inf {radius:.1e}, "
                          f"ellipticity {ellip:.1e}, |B| {modulus:.1e}")
        assert foci <= 1e-12
        assert radius <= 1e-14
        assert ellip <= 1e-12
        assert modulus <= 1e-9
        clock.check()


def test_connectivity_transition(criterion):
    with criterion(6, "connectivity transition for (5,2)") as info:
        clock = Clock(1.0)
        P = TreeParams(5, 2)
        split = split_exponent(P)
        below = membership(P, split - 0.05, 0.02j)
        above = membership(P, split + 0.05, 0.02j)
        info["detail"] = f"split {split:.12f}, {below.verdict} -> {above.verdict}"
        assert abs(split - math.log(10) / math.log(5)) <= 1e-12
        assert below.in_spectrum and not above.in_spectrum
        clock.check()


# gamma grid for the lp check; thresholds are kept 0.05 away from P_LP
GAMMA_LP = [0.0, 1.0, 0.5j, 0.3 + 0.05j, 0.05 + 0.2j]
P_LP = [1.2, 2.0, 3.0, 5.0, 10.0]


def test_lp_classification(criterion):
    with criterion(7, "lp classification, 5x5 grid for (2,5) and (5,2)") as info:
        clock = Clock(5.0)
        agree = 0
        for P in (TreeParams(2, 5), TreeParams(5, 2)):
            for g in GAMMA_LP:
                r = lp_range_of_spherical(P, g)
                for p in P_LP:
                    assert abs(p - r.lower) >= 0.05, "grid point too close to a threshold"
                    d = lp_partial_sums(P, g, p)
                    assert d.verdict != "inconclusive", (P, g, p)
                    assert (d.verdict == "summable") == r.contains(p), (P, g, p, d, r)
                    agree += 1
        assert lp_partial_sums(TreeParams(2, 5), 0, 2).verdict == "summable"
        assert lp_partial_sums(TreeParams(5, 2), 0, 2).verdict == "not summable"
        info["detail"] = f"{agree} verdicts agree"
        clock.check()


def _homogeneous_F(q, g):
    # smaller root of q F^2 - (q + 1) g F + 1 = 0
    disc = np.sqrt(((q + 1) * g) ** 2 - 4 * q + 0j)
    roots = [((q + 1) * g + s * disc) / (2 * q) for s in (1, -1)]
    return min(roots, key=abs)


def test_homogeneous_reduction(criterion):
    with criterion(8, "homogeneous reduction for q = 2, 3, 4") as info:
        clock = Clock(2.0)
        worst_F = worst_phi = 0.0
        rng = np.random.default_rng(15)
        n = np.arange(31)
        for q in (2, 3, 4):
            P = TreeParams(q, q)
            for g in sample_gammas(P, 50, seed=16):
                for sign in (1, -1):
                    worst_F = max(worst_F, float(rel_err(hitting_F(P, g, sign), _homogeneous_F(q, g))))
            for z in rng.uniform(-1.5, 1.5, 40) + 1j * rng.uniform(-1.5, 1.5, 40):
                if abs(z.real - 0.5) < 0.05:
                    continue
                g = (q ** z + q ** (1 - z)) / (q + 1)
                worst_phi = max(worst_phi, float(np.max(rel_err(
                    closed_form(P, g, n), homogeneous_spherical(q, z, n)))))
            b = 2 * math.sqrt(q) / (q + 1)
            e = endpoints(P)
            assert e.a == 0 and abs(e.b - b) < 1e-15
            for x in np.linspace(-b, b, 41)[1:-1]:
                assert membership(P, 2, x).in_spectrum
            for x in (b * 1.001, -b * 1.001, 0.01j, 0.3 + 0.001j):
                assert not membership(P, 2, x).in_spectrum
        info["detail"] = f"F rel err {worst_F:.1e}, phi rel err {worst_phi:.1e}"
        assert worst_F <= 1e-10
        assert worst_phi <= 1e-10
        clock.check()


def test_kernel_power_negative(criterion):
    with criterion(9, "K^z fails the eigen-equation, the generalized kernel passes") as info:
        clock = Clock(1.0)
        P = TreeParams(3, 5)
        z = 0.3 + 0.1j
        power = kernel_power_eigen_test(P, z)["residual"]
        g = np.sqrt(gamma_squared_of_z(P, z))
        gen = max(generalized_kernel_eigen_test(P, g).values())
        info["detail"] = f"K^z residual {power:.1e}, generalized {gen:.1e}"
        assert power > 1e-3
        assert gen <= 1e-10
        clock.check()
