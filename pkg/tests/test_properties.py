"""Property-based checks of the structural invariants."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from semitree.branch_kernels import (
    F_product_constant,
    branch_data,
    endpoints,
    generalized_kernel_eigen_test,
    in_cut,
    root_R,
)
from semitree.spectra import membership, sigma_p, spectral_radius, conjugate_exponent
from semitree.spherical import closed_form, gamma_squared_of_z, recurrence_eval, z_of_gamma
from semitree.tree_core import PLUS, MINUS, TreeParams, arc_partition, sphere_cardinality
from semitree.verify import rel_err

degree = st.integers(min_value=2, max_value=7)
params = st.builds(TreeParams, degree, degree)
coord = st.floats(min_value=-3, max_value=3, allow_nan=False)
exponent = st.one_of(st.floats(min_value=1, max_value=50), st.just(math.inf))


def _off_cut(P, g, gap=1e-3):
    e = endpoints(P)
    return abs(g) >= 0.05 and not (abs(g.imag) < gap and e.a - gap <= abs(g.real) <= e.b + gap)


@st.composite
def point(draw):
    P = draw(params)
    g = complex(draw(coord), draw(coord))
    assume(_off_cut(P, g))
    return P, g


@settings(max_examples=150, deadline=None)
@given(point())
def test_parity_in_gamma(pg):
    P, g = pg
    d, m = branch_data(P, g), branch_data(P, -g)
    assert abs(d.R - m.R) <= 1e-12 * max(1, abs(d.R))
    assert abs(d.B - m.B) <= 1e-12
    for sign in (PLUS, MINUS):
        assert rel_err(d.F(sign), -m.F(sign)) <= 1e-12
        assert rel_err(d.Ft(sign), -m.Ft(sign)) <= 1e-12


@settings(max_examples=150, deadline=None)
@given(point())
def test_reciprocity_and_resolvent(pg):
    P, g = pg
    d = branch_data(P, g)
    assert abs(d.B * d.Bt - 1) <= 1e-12
    assert abs(d.B) <= 1 + 1e-12
    for sign in (PLUS, MINUS):
        c = F_product_constant(P, sign)
        assert abs(d.F(sign) * d.Ft(sign) - c) <= 1e-12 * c
        q = P.degree(sign)
        lhs = g * d.F(sign)
        rhs = (1 + q * d.F_plus * d.F_minus) / (q + 1)
        assert rel_err(lhs, rhs) <= 1e-10


@settings(max_examples=150, deadline=None)
@given(point())
def test_root_squares_to_quartic(pg):
    P, g = pg
    d = branch_data(P, g)
    assert abs(root_R(P, g) ** 2 - d.W) <= 1e-12 * max(1, abs(d.W))


@settings(max_examples=100, deadline=None)
@given(point(), st.integers(min_value=0, max_value=40))
def test_closed_form_matches_recurrence(pg, n):
    P, g = pg
    ref = recurrence_eval(P, g, n).values[n]
    assert rel_err(closed_form(P, g, n), ref) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(params, coord, coord)
def test_recurrence_is_polynomial_in_gamma(P, x, y):
    # phi_n(-gamma) = (-1)^n phi_n(gamma) and phi_n(conj gamma) = conj phi_n(gamma)
    g = complex(x, y)
    f = recurrence_eval(P, g, 20).values
    sign = (-1.0) ** np.arange(21)
    assert np.allclose(recurrence_eval(P, -g, 20).values, sign * f, rtol=1e-12, atol=1e-12)
    assert np.allclose(recurrence_eval(P, g.conjugate(), 20).values, f.conj(), rtol=1e-12, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(params, exponent, coord, coord)
def test_membership_symmetries(P, p, x, y):
    g = complex(x, y)
    base = membership(P, p, g).verdict
    assert membership(P, p, -g).verdict == base
    assert membership(P, p, g.conjugate()).verdict == base
    assert membership(P, conjugate_exponent(p), g).verdict == base


@settings(max_examples=100, deadline=None)
@given(params, exponent)
def test_duality_of_spectra(P, p):
    pc = conjugate_exponent(p)
    assert math.isclose(spectral_radius(P, p), spectral_radius(P, pc), rel_tol=1e-12)
    a, b = sigma_p(P, p), sigma_p(P, pc)
    assert math.isclose(a.semi_axis_real, b.semi_axis_real, rel_tol=1e-12)
    assert math.isclose(a.semi_axis_imag, b.semi_axis_imag, rel_tol=1e-9, abs_tol=1e-15)


@settings(max_examples=100, deadline=None)
@given(params, exponent, exponent)
def test_radius_grows_away_from_two(P, p, r):
    lo, hi = sorted((p, r), key=lambda x: abs(0.5 - 1 / x))
    assert spectral_radius(P, lo) <= spectral_radius(P, hi) + 1e-15


@settings(max_examples=60, deadline=None)
@given(params, st.integers(min_value=0, max_value=30))
def test_partition_of_unity(P, n):
    parts = arc_partition(P, n).measures
    assert sum(parts) == 1
    assert all(m > 0 for m in parts)


@settings(max_examples=60, deadline=None)
@given(params, st.integers(min_value=1, max_value=30))
def test_sphere_growth(P, n):
    s = [sphere_cardinality(P, PLUS, m) for m in (n, n + 2)]
    assert s[1] == s[0] * P.product


@settings(max_examples=100, deadline=None)
@given(point())
def test_eigenvalue_map_round_trip(pg):
    P, g = pg
    z = z_of_gamma(P, g)
    assert abs(gamma_squared_of_z(P, z) - g * g) <= 1e-10 * max(1, abs(g * g))


@settings(max_examples=100, deadline=None)
@given(point(), st.booleans())
def test_generalized_kernel_is_eigenfunction(pg, alternative):
    P, g = pg
    r = generalized_kernel_eigen_test(P, g, alternative=alternative)
    assert max(r.values()) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(params, st.floats(min_value=0.01, max_value=0.99))
def test_cut_detection(P, t):
    e = endpoints(P)
    x = e.a + t * (e.b - e.a)
    assert in_cut(P, x) and in_cut(P, -x)
    assert not in_cut(P, complex(x, 1e-6))
