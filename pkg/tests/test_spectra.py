import math

import numpy as np
import pytest

from semitree.branch_kernels import BranchCutError, endpoints
from semitree.spectra import (
    BOUNDARY,
    INSIDE,
    OUTSIDE,
    Gamma_of_z,
    abs_B,
    boundary_curve,
    conjugate_exponent,
    is_connected,
    lp_range_of_spherical,
    membership,
    mu2_region,
    non_ellipticity_residual,
    p_crit,
    parse_p,
    sigma_p,
    spectral_radius,
    split_exponent,
)
from semitree.spherical import gamma_squared_of_z
from semitree.tree_core import MINUS, PLUS, TreeParams

P52 = TreeParams(5, 2)
P25 = TreeParams(2, 5)


def test_parse_p():
    assert parse_p("inf") == math.inf and parse_p(3) == 3.0
    with pytest.raises(ValueError):
        parse_p(0.5)
    assert conjugate_exponent(1) == math.inf and conjugate_exponent(3) == 1.5


def test_gamma_of_z():
    for P in (P52, TreeParams(3, 5)):
        assert Gamma_of_z(P, 0, PLUS) == pytest.approx(1.0)
        assert Gamma_of_z(P, 0, MINUS) == pytest.approx(1.0)
        rng = np.random.default_rng(0)
        for z in rng.normal(size=5) + 1j * rng.normal(size=5):
            g2 = gamma_squared_of_z(P, z)
            want = ((P.q_minus + 1) * g2 - 1) / P.q_minus
            assert abs(Gamma_of_z(P, z, PLUS) - want) <= 1e-12 * max(1, abs(want))
        L = math.log(P.product)
        z = math.log(P.q_minus) / L + 1j * math.pi / L
        assert Gamma_of_z(P, z, PLUS) == pytest.approx(-1 / P.q_minus)


def test_mu2_region():
    P = P52
    assert mu2_region(P, 2).semi_axis_imag == pytest.approx(0.0, abs=1e-15)
    r1 = mu2_region(P, 1, PLUS)
    c = r1.center.real
    half = (1 + 10) / (6 * 2)
    assert r1.semi_axis_real == pytest.approx(half)
    assert c == pytest.approx((2 - 1) / (6 * 2))
    rng = np.random.default_rng(1)
    for p in (1.5, 3.0):
        reg = mu2_region(P, p, PLUS)
        for t in rng.uniform(-5, 5, 100):
            w = Gamma_of_z(P, 1 / p + 1j * t, PLUS)
            assert reg.verdict(w, tol=1e-9) == BOUNDARY


def test_sigma_p():
    for P in (P52, TreeParams(3, 3), TreeParams(2, 7)):
        e = endpoints(P)
        for p in (1, 1.2, 2, 6, math.inf):
            s = sigma_p(P, p)
            assert s.foci[0] == pytest.approx(e.a ** 2, abs=1e-14)
            assert s.foci[1] == pytest.approx(e.b ** 2, abs=1e-14)
        s2 = sigma_p(P, 2)
        assert s2.semi_axis_imag == pytest.approx(0.0, abs=1e-15)
        assert s2.center.real - s2.semi_axis_real == pytest.approx(e.a ** 2, abs=1e-14)


def test_non_ellipticity():
    assert non_ellipticity_residual(TreeParams(3, 3), 1.7) == pytest.approx(0.0, abs=1e-15)
    want = (3 / 18) ** 2
    assert non_ellipticity_residual(P52, 3) == pytest.approx(want, abs=1e-14)


def test_membership_examples():
    assert membership(P52, 2, 0.5).verdict == INSIDE
    assert membership(P52, 2, 0.1).verdict == OUTSIDE
    assert membership(P52, 2, endpoints(P52).b).verdict == BOUNDARY
    for p in (1.2, 2, 3, math.inf):
        assert membership(P52, p, spectral_radius(P52, p)).verdict == BOUNDARY
        assert not membership(P52, p, 1.01 * spectral_radius(P52, p)).in_spectrum


def test_membership_zero():
    assert membership(P52, 2, 0).in_spectrum
    assert membership(P25, 2, 0).in_spectrum
    # connected range: 0 is inside geometrically
    assert not membership(P25, 1.1, 0).includes_isolated_zero
    assert membership(P25, 1.1, 0).in_spectrum
    q = membership(P25, 2.5, 0)
    assert q.in_spectrum and q.includes_isolated_zero
    q = membership(P52, 2.5, 0)
    assert not q.in_spectrum and "undetermined" in q.note


def test_boundary_curve():
    P = P52
    for p in (1, 1.5, 3, math.inf):
        curve = boundary_curve(P, p, 64)
        assert curve.sheet1[0] == pytest.approx(spectral_radius(P, p))
        assert np.max(np.abs(curve.sheet1)) == pytest.approx(spectral_radius(P, p), abs=1e-10)
        assert all(membership(P, p, g, tol=1e-9).verdict == BOUNDARY for g in curve.points())
    flat = boundary_curve(P, 2, 64)
    assert np.max(np.abs(flat.points().imag)) <= 1e-14
    assert all(membership(P, 2, g, tol=1e-9).in_spectrum for g in flat.points())
    with pytest.raises(ValueError):
        boundary_curve(P, 2, 4)


def test_swap_invariance_of_curve():
    a = boundary_curve(P52, 3, 32)
    b = boundary_curve(P25, 3, 32)
    assert np.allclose(a.points(), b.points(), atol=1e-15)


def test_spectral_radius():
    for P in (P52, TreeParams(3, 5)):
        assert spectral_radius(P, 1) == pytest.approx(1.0, abs=1e-15)
        assert spectral_radius(P, math.inf) == pytest.approx(1.0, abs=1e-15)
        assert spectral_radius(P, 2) == pytest.approx(endpoints(P).b, abs=1e-15)
        # symmetric under p <-> p'
        assert spectral_radius(P, 3) == pytest.approx(spectral_radius(P, 1.5))
    r4 = spectral_radius(P52, 4)
    assert endpoints(P52).b < r4 < 1
    ps = np.linspace(2, 40, 50)
    vals = [spectral_radius(P52, p) for p in ps]
    assert np.all(np.diff(vals) > 0)


def test_thresholds():
    assert p_crit(TreeParams(3, 3)) == pytest.approx(2.0)
    assert p_crit(P52) == pytest.approx(1 + math.log(5) / math.log(2))
    assert p_crit(P25) == pytest.approx(1 + math.log(2) / math.log(5))
    assert split_exponent(TreeParams(4, 4)) == pytest.approx(2.0)
    assert split_exponent(P52) == pytest.approx(math.log(10) / math.log(5))


def test_connectivity():
    s = split_exponent(P52)
    assert is_connected(P52, s - 0.05)
    assert not is_connected(P52, s + 0.05)
    assert not is_connected(P52, 2)
    assert is_connected(TreeParams(3, 3), 2)
    for eps in (0.01, 0.02):
        assert membership(P52, s - 0.05, 1j * eps).in_spectrum
        assert not membership(P52, s + 0.05, 1j * eps).in_spectrum


def test_abs_B():
    e = endpoints(P52)
    assert abs_B(P52, e.b) == 1.0 and abs_B(P52, 0.5) == pytest.approx(1.0)
    assert abs_B(P52, 5.0) < 1
    assert abs_B(P52, 1e3) == pytest.approx(2 * P52.qbar / (2 * 18 * 1e6), rel=1e-3)


def test_lp_range():
    r = lp_range_of_spherical(P25, 0)
    assert r.contains(2) and not r.contains(1.4)
    assert not lp_range_of_spherical(P52, 0).contains(2)
    e = endpoints(P52)
    rb = lp_range_of_spherical(P52, e.b)
    assert rb.lower == 2.0 and rb.contains(3) and not rb.contains(2)
    assert lp_range_of_spherical(P52, 1.0).bounded
    assert not lp_range_of_spherical(P52, 1.0).contains(50)
    assert not lp_range_of_spherical(P52, 2.0).bounded
    with pytest.raises(BranchCutError):
        lp_range_of_spherical(P52, 0.5)


def test_lp_threshold_three():
    # |Bt| = qbar^(1/3) puts the threshold at p = 3
    P = TreeParams(3, 5)
    z = 1 / 3 + 0.4j
    g = np.sqrt(gamma_squared_of_z(P, z))
    assert 1 / abs_B(P, g) == pytest.approx(P.qbar ** (1 / 3))
    assert lp_range_of_spherical(P, g).lower == pytest.approx(3.0)
