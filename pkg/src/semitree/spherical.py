"""
Spherical functions phi(., v0 | gamma) and the eigenvalue map.

Three independent evaluators are provided:

* :func:`closed_form` -- the two-term expression in powers of B/qbar and
  Bt/qbar, with linear-in-n formulas at the degenerate points +-a, +-b;
* :func:`recurrence_eval` -- forward recursion of the radial eigen-equation;
* :func:`arc_sum_eval` -- the generalized Poisson kernel integrated against the
  boundary measure, one arc at a time.

All three are written for v0 in the ``+`` class; a tree whose root lies in
the other class is handled by relabelling (``TreeParams.rooted``).
"""

from __future__ import annotations

import cmath
import math
import operator
from dataclasses import dataclass

import numpy as np

from .branch_kernels import (
    BranchCutError,
    branch_data,
    endpoints,
    in_cut,
)
from .tree_core import TreeParams, _arc_weights

# Closed-form coefficients divide by B^2 - 1; inside this window the
# recurrence is used instead.
DEGENERATE_WINDOW = 1e-3
# Relative distance at which gamma is taken to be exactly an endpoint.
ENDPOINT_TOL = 1e-12


@dataclass(frozen=True)
class RadialProfile:
    """Values f_0..f_N of a radial function, f_n at distance n from v0."""

    params: TreeParams
    gamma: complex
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    def recurrence_residual(self) -> float:
        """Max relative residual of the radial eigen-equation at 1 <= n < N."""
        f = self.values
        p = self.params.rooted()
        worst = 0.0
        for n in range(1, len(f) - 1):
            q = p.q_plus if n % 2 == 0 else p.q_minus
            lhs = self.gamma * f[n]
            rhs = (q * f[n + 1] + f[n - 1]) / (q + 1)
            scale = max(abs(lhs), abs(rhs), abs(f[n - 1]) / (q + 1), 1e-300)
            worst = max(worst, abs(lhs - rhs) / scale)
        return worst


@dataclass(frozen=True)
class SphericalCoefficients:
    """Coefficients of phi_n = kappa (B/qbar)^m + kappat (Bt/qbar)^m, m = floor(n/2).

    ``kappa_even`` applies to even n, ``kappa_odd`` to odd n.  At the
    degenerate points B = +-1 the coefficients are undefined (NaN) and
    ``degenerate_kind`` is ``"B=+1"`` or ``"B=-1"``.
    """

    kappa_even: complex
    kappa_odd: complex
    kappat_even: complex
    kappat_odd: complex
    B: complex
    Bt: complex
    degenerate: bool = False
    degenerate_kind: str = "none"


def _endpoint_kind(params: TreeParams, gamma: complex) -> str:
    """'B=+1' at +-b, 'B=-1' at +-a (a > 0), otherwise 'none'."""
    if abs(gamma.imag) > ENDPOINT_TOL:
        return "none"
    e = endpoints(params)
    x = abs(gamma.real)
    if abs(x - e.b) <= ENDPOINT_TOL * e.b:
        return "B=+1"
    if e.a > 0 and abs(x - e.a) <= ENDPOINT_TOL * e.a:
        return "B=-1"
    return "none"


def _kappa(params: TreeParams, B: complex) -> complex:
    qp, qm = params.q_plus, params.q_minus
    qbar = params.qbar
    return qp * (B - 1 / qbar) * (B + math.sqrt(qm / qp)) / ((qp + 1) * (B * B - 1))


def coefficients(params: TreeParams, gamma) -> SphericalCoefficients:
    """Coefficients of the closed form of phi(., v0 | gamma).

    Parameters
    ----------
    params : TreeParams
    gamma : complex
        Off the open cuts, gamma != 0.

    Returns
    -------
    SphericalCoefficients
        Flagged degenerate (with NaN coefficients) at +-a and +-b.
    """
    p = params.rooted()
    gamma = complex(gamma)
    if gamma == 0:
        raise ValueError("gamma = 0 has no two-term expansion; use closed_form")
    d = branch_data(p, gamma)
    kind = _endpoint_kind(p, gamma)
    if kind != "none":
        nan = complex("nan")
        return SphericalCoefficients(nan, nan, nan, nan, d.B, d.Bt, True, kind)
    ke = _kappa(p, d.B)
    kt = _kappa(p, d.Bt)
    return SphericalCoefficients(ke, ke * d.F_minus, kt, kt * d.Ft_minus, d.B, d.Bt)


def coefficients_by_initial_values(params: TreeParams, gamma) -> SphericalCoefficients:
    """Same coefficients obtained by fitting phi_0..phi_3 to the two modes.

    Solves c + ct = 1 and c B + ct Bt = qbar f_2 for the even part, and the
    analogous system with f_1, f_3 for the odd part.  Independent of the
    kappa formula and used to cross-check it.
    """
    p = params.rooted()
    gamma = complex(gamma)
    qp, qm = p.q_plus, p.q_minus
    d = branch_data(p, gamma)
    qbar = p.qbar
    nh = d.Gamma_hat
    B = d.B
    ce = (((qm + 1) * gamma ** 2 - 1) * qbar * B - qm) / (qm * (B * B - 1))
    co = ((nh - qp - qm - 1) * B - qbar) * gamma / (qbar * (B * B - 1))
    Bt = d.Bt
    cte = (((qm + 1) * gamma ** 2 - 1) * qbar * Bt - qm) / (qm * (Bt * Bt - 1))
    cto = ((nh - qp - qm - 1) * Bt - qbar) * gamma / (qbar * (Bt * Bt - 1))
    return SphericalCoefficients(ce, co, cte, cto, B, Bt)


def _int_powers(x: complex, m_max: int) -> np.ndarray:
    """x**0 .. x**m_max by successive multiplication."""
    out = np.empty(m_max + 1, dtype=complex)
    out[0] = 1.0
    for m in range(1, m_max + 1):
        out[m] = out[m - 1] * x
    return out


def _zero_profile(params: TreeParams, n: np.ndarray) -> np.ndarray:
    qm = params.q_minus
    out = np.zeros(n.shape, dtype=complex)
    even = n % 2 == 0
    half = n[even] // 2
    out[even] = np.where(half % 2 == 0, 1.0, -1.0) * float(qm) ** (-half.astype(float))
    return out


def _degenerate_profile(params: TreeParams, gamma: complex, kind: str, n: np.ndarray) -> np.ndarray:
    qp, qm = params.q_plus, params.q_minus
    qbar = params.qbar
    root = math.sqrt(qm / qp)
    sgn = 1.0 if kind == "B=+1" else -1.0  # the value of B
    slope = qp / (qp + 1) * (sgn - 1 / qbar) * (sgn + root)
    # F-(+-b) = +-c and F-(+-a) = +-sign(q+ - q-) c, c = sqrt((q+ + 1)/(q+ (q- + 1)))
    side = 1.0 if gamma.real > 0 else -1.0
    f_minus = side * math.sqrt((qp + 1) / (qp * (qm + 1)))
    if kind == "B=-1":
        f_minus *= math.copysign(1.0, qp - qm)
    base = sgn * qbar
    out = np.empty(n.shape, dtype=complex)
    even = n % 2 == 0
    m = n // 2
    out[even] = base ** (-m[even].astype(float)) * (1 + slope * m[even])
    odd = ~even
    out[odd] = (base ** (-m[odd].astype(float))
                * ((qp + sgn * qbar) / (qp + 1) + slope * m[odd]) * f_minus)
    return out


def closed_form(params: TreeParams, gamma, n):
    """phi(v, v0 | gamma) at |v| = n from the closed-form expression.

    Parameters
    ----------
    params : TreeParams
    gamma : complex
        Off the open cuts; the endpoints +-a, +-b and gamma = 0 are allowed.
    n : int or array_like of int
        Distances from v0.

    Returns
    -------
    complex or ndarray

    Raises
    ------
    BranchCutError
        If gamma lies strictly inside a cut.

    Notes
    -----
    Within ``DEGENERATE_WINDOW`` of B = +-1 (but not at the endpoints
    themselves) the two-term expression is ill-conditioned and the values
    are taken from :func:`recurrence_eval`.
    """
    p = params.rooted()
    gamma = complex(gamma)
    scalar = np.ndim(n) == 0
    ns = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if np.any(ns < 0):
        raise ValueError("distances must be non-negative")
    if gamma == 0:
        out = _zero_profile(p, ns)
        return out[0] if scalar else out
    if in_cut(p, gamma):
        raise BranchCutError(f"gamma={gamma} lies on a cut")
    kind = _endpoint_kind(p, gamma)
    if kind != "none":
        out = _degenerate_profile(p, gamma, kind, ns)
        return out[0] if scalar else out
    c = coefficients(p, gamma)
    if min(abs(c.B - 1), abs(c.B + 1)) < DEGENERATE_WINDOW:
        out = recurrence_eval(p, gamma, int(ns.max())).values[ns]
        return out[0] if scalar else out
    m_max = int(ns.max()) // 2
    up = _int_powers(c.B / p.qbar, m_max)
    down = _int_powers(c.Bt / p.qbar, m_max)
    m = ns // 2
    even = ns % 2 == 0
    out = np.where(even, c.kappa_even, c.kappa_odd) * up[m] \
        + np.where(even, c.kappat_even, c.kappat_odd) * down[m]
    return out[0] if scalar else out


def recurrence_eval(params: TreeParams, gamma, n_max: int) -> RadialProfile:
    """Radial gamma-eigenfunction with f_0 = 1 by forward recursion.

    Uses f_{n+1} = ((q + 1) gamma f_n - f_{n-1}) / q with q the forward
    degree at distance n.  Valid for every complex gamma, cuts and 0
    included.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    p = params.rooted()
    gamma = complex(gamma)
    f = np.empty(n_max + 1, dtype=complex)
    f[0] = 1.0
    if n_max >= 1:
        f[1] = gamma
    for n in range(1, n_max):
        q = p.q_plus if n % 2 == 0 else p.q_minus
        f[n + 1] = ((q + 1) * gamma * f[n] - f[n - 1]) / q
    return RadialProfile(params, gamma, f)


def initial_values(params: TreeParams, gamma) -> tuple[complex, complex]:
    """Closed expressions for f_2 and f_3."""
    p = params.rooted()
    qp, qm = p.q_plus, p.q_minus
    g = complex(gamma)
    f2 = ((qm + 1) * g * g - 1) / qm
    f3 = ((qp + 1) * (qm + 1) * (g * g - 1) / (qp * qm) + 1) * g
    return f2, f3


def arc_sum_eval(params: TreeParams, gamma, n: int, alternative: bool = False) -> complex:
    """phi at distance n as the generalized Poisson kernel integrated over arcs.

    Sums K(v, v0, omega | gamma) nu(Omega_k(v0, v)) over the closest-vertex
    index k = 0..n, with horospherical index 2k - n.  With
    ``alternative=True`` the kernel built from the Ft branch is used.

    Raises
    ------
    ValueError
        At gamma = 0, where the odd-distance kernel is singular.
    """
    n = operator.index(n)
    p = params.rooted()
    gamma = complex(gamma)
    if gamma == 0:
        raise ValueError("the arc sum is not defined at gamma = 0")
    if n == 0:
        return 1.0 + 0j
    d = branch_data(p, gamma)
    if alternative:
        ff, fm = d.Ft_plus * d.Ft_minus, d.Ft_minus
    else:
        ff, fm = d.B / p.qbar, d.F_minus
    weights = _arc_weights(p, n)
    k = np.arange(n + 1)
    if n % 2 == 0:
        expo = n // 2 - k
        extra = 1.0
    else:
        expo = (n - 1) // 2 - k
        extra = fm
    pos = _int_powers(ff, max(int(expo.max()), 0))
    neg = _int_powers(1 / ff, max(int(-expo.min()), 0))
    kern = np.where(expo >= 0, pos[np.maximum(expo, 0)], neg[np.maximum(-expo, 0)])
    return complex(extra * np.dot(kern, weights))


# ---------------------------------------------------------------------------
# eigenvalue map


def gamma_squared_of_z(params: TreeParams, z) -> complex:
    """gamma(z)^2 = (q+^z + q-^(1-z)) (q-^z + q+^(1-z)) / ((q+ + 1)(q- + 1))."""
    qp, qm = params.q_plus, params.q_minus
    z = complex(z)
    num = (qp ** z + qm ** (1 - z)) * (qm ** z + qp ** (1 - z))
    return num / ((qp + 1) * (qm + 1))


def z_of_gamma(params: TreeParams, gamma) -> complex:
    """One solution z of gamma(z)^2 = gamma^2.

    Returns ``z = (1/2) log_qbar((N - q+ - q- + R)/2)`` with the principal
    logarithm, so ``|Im z| <= pi / (2 ln qbar)``.  The full solution set is
    ``{z + 2 pi i k / ln qbar, 1 - z + 2 pi i k / ln qbar}`` together with
    the shifts by ``pi i / ln qbar`` (which leave gamma^2 unchanged).
    """
    d = branch_data(params, gamma)
    x = (d.Gamma_hat - (params.q_plus + params.q_minus) + d.R) / 2
    return cmath.log(x) / (2 * math.log(params.qbar))


def homogeneous_spherical(q: int, z, n):
    """Homogeneous spherical function c(z) q^(-zn) + c(1-z) q^(-(1-z)n)."""
    z = complex(z)

    def c(w):
        return (q ** (1 - w) - q ** (w - 1)) / ((q + 1) * (q ** (-w) - q ** (w - 1)))

    n = np.asarray(n)
    return c(z) * q ** (-z * n) + c(1 - z) * q ** (-(1 - z) * n)
