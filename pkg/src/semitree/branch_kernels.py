r"""
Eigenvalue-dependent quantities on T(q+, q-).

For a complex eigenvalue gamma write ``N = (q+ + 1)(q- + 1) gamma**2``.  The
quartic

.. math:: W = N^2 - 2(q_+ + q_-) N + (q_+ - q_-)^2

vanishes at +-a and +-b, and its square root ``R`` is realized as

.. math:: R = \sqrt{N - s_+}\,\sqrt{N - s_-},\qquad s_\pm = q_+ + q_- \pm 2\sqrt{q_+q_-}

with principal square roots.  The product is continuous off the real
intervals (-b, -a) and (a, b) (the cuts), positive for gamma > b and
negative on (-a, a).  All hitting probabilities and kernels are rational
in gamma and R.

Singular situations are reported with exceptions: :class:`BranchCutError`
for points strictly inside a cut, :class:`PoleError` for the pole of F at
gamma = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tree_core import MINUS, PLUS, TreeParams, _check_parity


class BranchCutError(ValueError):
    """The point lies strictly inside a cut, where R is two-valued."""


class PoleError(ArithmeticError):
    """The requested quantity has a pole at this point."""


# Relative width used to decide that a real gamma sits in a cut.
CUT_TOL = 1e-14


@dataclass(frozen=True)
class SpectrumEndpoints:
    """Endpoints 0 <= a < b < 1 of the cuts [-b, -a] and [a, b]."""

    a: float
    b: float


def endpoints(params: TreeParams) -> SpectrumEndpoints:
    """Endpoints of the l2 spectrum of mu1.

    Examples
    --------
    >>> e = endpoints(TreeParams(5, 2))
    >>> round(e.a, 6), round(e.b, 6)
    (0.193713, 0.86038)
    """
    sp, sm = math.sqrt(params.q_plus), math.sqrt(params.q_minus)
    den = math.sqrt((params.q_plus + 1) * (params.q_minus + 1))
    return SpectrumEndpoints(abs(sp - sm) / den, (sp + sm) / den)


def _nhat(params: TreeParams, gamma):
    return (params.q_plus + 1) * (params.q_minus + 1) * gamma * gamma


def quartic_W(params: TreeParams, gamma):
    """W(gamma) = N^2 - 2(q+ + q-)N + (q+ - q-)^2, N = (q+ + 1)(q- + 1) gamma^2."""
    qp, qm = params.q_plus, params.q_minus
    nh = _nhat(params, gamma)
    return nh * nh - 2 * (qp + qm) * nh + (qp - qm) ** 2


def in_cut(params: TreeParams, gamma) -> bool:
    """True when gamma is real (to rounding) with a < |gamma| < b."""
    gamma = complex(gamma)
    e = endpoints(params)
    if abs(gamma.imag) > CUT_TOL * max(1.0, abs(gamma.real)):
        return False
    x = abs(gamma.real)
    return e.a * (1 + CUT_TOL) < x < e.b * (1 - CUT_TOL)


def _root_R_unchecked(params: TreeParams, gamma):
    s = params.q_plus + params.q_minus
    two_qbar = 2 * params.qbar
    nh = _nhat(params, gamma)
    return np.sqrt(nh - (s + two_qbar) + 0j) * np.sqrt(nh - (s - two_qbar) + 0j)


def root_R(params: TreeParams, gamma) -> complex:
    """The branch of sqrt(W) used throughout.

    Raises
    ------
    BranchCutError
        If gamma lies strictly inside a cut.
    """
    gamma = complex(gamma)
    if in_cut(params, gamma):
        raise BranchCutError(f"gamma={gamma} lies on a cut")
    return complex(_root_R_unchecked(params, gamma))


@dataclass(frozen=True)
class BranchData:
    """Every eigenvalue-dependent scalar at one point gamma.

    ``F_plus`` etc. are ``None`` where the quantity has a pole (gamma = 0);
    ``on_cut`` marks values taken as upper limits gamma + i0.
    """

    gamma: complex
    Gamma_hat: complex
    W: complex
    R: complex
    F_plus: complex | None
    F_minus: complex | None
    Ft_plus: complex | None
    Ft_minus: complex | None
    B: complex
    Bt: complex
    on_cut: bool = False
    at_zero: bool = False

    def F(self, sign: int) -> complex | None:
        return self.F_plus if sign == PLUS else self.F_minus

    def Ft(self, sign: int) -> complex | None:
        return self.Ft_plus if sign == PLUS else self.Ft_minus


def _stable_pair(minus_num, plus_num, den_minus, den_plus, product):
    """Values minus_num/den_minus and plus_num/den_plus whose product is known.

    The numerators differ only in the sign of R, so one of them may cancel;
    the larger one is divided out and the other follows from the product.
    """
    if abs(minus_num) >= abs(plus_num):
        x = minus_num / den_minus
        return x, product / x
    y = plus_num / den_plus
    return product / y, y


def _F_pair(params, gamma, R):
    """(F+, F-, Ft+, Ft-) off the cuts, gamma != 0."""
    qp, qm = params.q_plus, params.q_minus
    nh = _nhat(params, gamma)
    den_p = 2 * qm * (qp + 1) * gamma
    den_m = 2 * qp * (qm + 1) * gamma
    fp, ftp = _stable_pair(nh - (qp - qm) - R, nh - (qp - qm) + R, den_p, den_p,
                           F_product_constant(params, PLUS))
    fm, ftm = _stable_pair(nh + (qp - qm) - R, nh + (qp - qm) + R, den_m, den_m,
                           F_product_constant(params, MINUS))
    return fp, fm, ftp, ftm


def _zero_limits(params: TreeParams):
    """F+, F-, Ft+, Ft- at gamma = 0 (None marks a pole) in the strictly
    semi-homogeneous case."""
    qp, qm = params.q_plus, params.q_minus
    if qp > qm:
        # F+ vanishes linearly, F- has a pole; the tilde branch is the reverse.
        return 0j, None, None, 0j
    return None, 0j, 0j, None


def branch_data(params: TreeParams, gamma, direction: complex | None = None) -> BranchData:
    """Evaluate W, R, F+-, Ft+-, B and Bt at ``gamma``.

    Parameters
    ----------
    params : TreeParams
    gamma : complex
        Must be off the open cuts.
    direction : complex, optional
        Approach direction for gamma = 0 in the homogeneous case, where F has
        the two directional limits +-i/sqrt(q).  Ignored elsewhere.
    """
    gamma = complex(gamma)
    qp, qm = params.q_plus, params.q_minus
    R = root_R(params, gamma)
    nh = complex(_nhat(params, gamma))
    W = complex(quartic_W(params, gamma))
    qbar = params.qbar
    B, Bt = _stable_pair(nh - (qp + qm) - R, nh - (qp + qm) + R, 2 * qbar, 2 * qbar, 1.0)
    if gamma == 0:
        if params.homogeneous:
            # 0 lies inside the cut [-b, b]; only one-sided limits exist
            if direction is None or complex(direction).imag == 0:
                raise BranchCutError(
                    "gamma=0 lies on the cut of a homogeneous tree; pass a non-real direction")
            # F -> -i/sqrt(q) from the upper half plane, +i/sqrt(q) from below
            val = (-1j if complex(direction).imag > 0 else 1j) / math.sqrt(qp)
            fp = fm = val
            ftp = ftm = (1 / qp) / val
            return BranchData(gamma, nh, W, R, fp, fm, ftp, ftm, B, Bt, at_zero=True)
        fp, fm, ftp, ftm = _zero_limits(params)
        return BranchData(gamma, nh, W, R, fp, fm, ftp, ftm, B, Bt, at_zero=True)
    fp, fm, ftp, ftm = _F_pair(params, gamma, R)
    return BranchData(gamma, nh, W, R, fp, fm, ftp, ftm, B, Bt)


def _pick(value, gamma, sign):
    if value is None:
        raise PoleError(f"F{'+' if sign == PLUS else '-'} has a pole at gamma={gamma}")
    return value


def hitting_F(params: TreeParams, gamma, sign: int, direction: complex | None = None) -> complex:
    """Generalized hitting probability F+(gamma) or F-(gamma).

    F^eps(gamma) continues, in the eigenvalue, the probability that the walk
    started at a vertex of class ``eps`` ever visits a given neighbour.

    Parameters
    ----------
    params : TreeParams
    gamma : complex
        Off the open cuts.
    sign : int
        +1 for F+, -1 for F-.
    direction : complex, optional
        Approach direction, required at gamma = 0 for homogeneous trees.

    Raises
    ------
    BranchCutError, PoleError

    Examples
    --------
    >>> hitting_F(TreeParams(5, 2), 1.0, +1)
    (0.25+0j)
    """
    sign = _check_parity(sign)
    d = branch_data(params, gamma, direction)
    return _pick(d.F(sign), d.gamma, sign)


def hitting_Ft(params: TreeParams, gamma, sign: int, direction: complex | None = None) -> complex:
    """The second determination Ft+- (same formula with +R)."""
    sign = _check_parity(sign)
    d = branch_data(params, gamma, direction)
    return _pick(d.Ft(sign), d.gamma, sign)


def F_product_constant(params: TreeParams, sign: int) -> float:
    """F^eps Ft^eps, which does not depend on gamma."""
    q_s, q_o = params.degree(sign), params.degree(-sign)
    return (q_o + 1) / (q_o * (q_s + 1))


def B_of_gamma(params: TreeParams, gamma) -> tuple[complex, complex]:
    """B = qbar F+ F- and its reciprocal Bt, finite and non-zero off the cuts.

    Examples
    --------
    >>> B, Bt = B_of_gamma(TreeParams(3, 5), 0)
    >>> round(B.real * 15 ** 0.5, 12)
    -3.0
    """
    d = branch_data(params, gamma)
    return d.B, d.Bt


def cut_limit(params: TreeParams, x: float, eps: float = 1e-9) -> BranchData:
    """Boundary values on a cut, approached from the upper half plane.

    The function is continued as gamma = x + i*eps and the value at
    eps -> 0+ is obtained by Richardson extrapolation from eps and eps/2.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    d1 = branch_data(params, complex(x, eps))
    d2 = branch_data(params, complex(x, eps / 2))

    def extra(u, v):
        return 2 * v - u

    fp = extra(d1.F_plus, d2.F_plus)
    fm = extra(d1.F_minus, d2.F_minus)
    ftp = extra(d1.Ft_plus, d2.Ft_plus)
    ftm = extra(d1.Ft_minus, d2.Ft_minus)
    R = extra(d1.R, d2.R)
    B = extra(d1.B, d2.B)
    g = complex(x)
    return BranchData(g, complex(_nhat(params, g)), complex(quartic_W(params, g)), R,
                      fp, fm, ftp, ftm, B, 1 / B, on_cut=in_cut(params, g))


# ---------------------------------------------------------------------------
# kernels


def poisson_kernel(params: TreeParams, n: int, k: int) -> float:
    """Harmonic Poisson kernel K(v, v0, omega) for |v| = n and closest index k.

    Depends on omega only through the horospherical index 2k - n.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    rp = params.rooted()
    qp, qm = rp.q_plus, rp.q_minus
    prod = float(rp.product)
    base = prod ** (k - n / 2)
    if n % 2 == 0:
        return base
    return (qp + 1) / (qm + 1) * math.sqrt(qm / qp) * base


def _check_h(parity_of_v: int, h: int) -> None:
    _check_parity(parity_of_v)
    if (h % 2 == 0) != (parity_of_v == PLUS):
        raise ValueError("horospherical index must be even for |v| even and odd for |v| odd")


def _kernel(ff: complex, f_minus: complex, parity_of_v: int, h: int) -> complex:
    """(F+F-)^(-h/2), or (F+F-)^(-(h+1)/2) F- on odd distance."""
    if parity_of_v == PLUS:
        return ff ** (-h // 2)
    return ff ** (-(h + 1) // 2) * f_minus


def generalized_poisson(params: TreeParams, parity_of_v: int, h: int, gamma) -> complex:
    """Generalized Poisson kernel K(v, v0, omega | gamma).

    Parameters
    ----------
    params : TreeParams
    parity_of_v : int
        +1 if |v| is even, -1 if odd.
    h : int
        Horospherical index, with the parity of |v|.
    gamma : complex
        Off the cuts.

    Returns
    -------
    complex
        ``inf`` or ``0`` for the odd-distance limits at gamma = 0.

    Examples
    --------
    >>> round(generalized_poisson(TreeParams(5, 2), -1, 1, 1.0).real, 12)
    4.0
    """
    _check_h(parity_of_v, h)
    rp = params.rooted()
    gamma = complex(gamma)
    d = branch_data(rp, gamma)
    ff = d.B / rp.qbar
    if d.at_zero and parity_of_v == MINUS:
        return complex("inf") if rp.q_plus > rp.q_minus else 0j
    # at gamma = 0, F+F- = B/qbar = -1/max(q+, q-) stays finite
    return _kernel(ff, d.F_minus, parity_of_v, h)


def alt_generalized_poisson(params: TreeParams, parity_of_v: int, h: int, gamma) -> complex:
    """Alternative kernel Kt = Ft(v, j)/Ft(v0, j), built from the Ft branch.

    Equal to qbar^h / K for even |v| and to
    qbar^h / K * (q+ + 1) sqrt(q-) / ((q- + 1) sqrt(q+)) for odd |v|;
    identically 1 at gamma = 1.
    """
    _check_h(parity_of_v, h)
    rp = params.rooted()
    d = branch_data(rp, gamma)
    if d.at_zero:
        if parity_of_v == PLUS:
            return complex((d.Bt / rp.qbar) ** (-h // 2))
        return complex("inf") if rp.q_plus < rp.q_minus else 0j
    fft = d.Ft_plus * d.Ft_minus
    return _kernel(fft, d.Ft_minus, parity_of_v, h)


def kernel_power_eigen_test(params: TreeParams, z: complex) -> dict:
    """Test whether the power K^z of the harmonic kernel is a mu1-eigenfunction.

    Integrating over the boundary arcs seen from v0 and from a neighbour v1
    gives u_z(v0) and u_z(v1) for the function u_z = K(., v0, omega)^z
    averaged over the arcs through v1.  If K^z were an eigenfunction these
    would have the ratio K^z(v1) / K^z(v0) of the kernel itself.

    Returns
    -------
    dict
        ``mu1_value``: (mu1 K^z)(v1) at a depth-one vertex on the ray to omega,
        ``lam``: the eigenvalue that would be forced by v0,
        ``residual``: relative failure of mu1 K^z = lam K^z at v1.
    """
    rp = params.rooted()
    qp, qm = rp.q_plus, rp.q_minus
    z = complex(z)

    def kz(n, k):
        return complex(poisson_kernel(rp, n, k)) ** z

    # v0 has q+ + 1 neighbours: one toward omega (h = 1), q+ away (h = -1).
    lam = (kz(1, 1) + qp * kz(1, 0)) / (qp + 1)
    # v1 toward omega: neighbours v0 (h = 0), v2 toward omega (h = 2), q- - 1
    # others at distance 2 branching at v1 (h = 0 as seen from v0).
    mu1_v1 = (kz(0, 0) + kz(2, 2) + (qm - 1) * kz(2, 1)) / (qm + 1)
    resid = abs(mu1_v1 - lam * kz(1, 1)) / abs(lam * kz(1, 1))
    return {"mu1_value": mu1_v1, "lam": lam, "residual": resid}


def generalized_kernel_eigen_test(params: TreeParams, gamma, alternative: bool = False) -> dict:
    """Check mu1 K(.|gamma) = gamma K(.|gamma) at v0 and at a depth-one vertex.

    The kernel depends on a vertex only through its class and horospherical
    index, so both neighbourhoods are described by (parity, h) pairs.

    Returns
    -------
    dict
        ``residual_v0`` and ``residual_v1``: relative failures at v0 and at
        the neighbour v1 on the ray to omega.
    """
    rp = params.rooted()
    qp, qm = rp.q_plus, rp.q_minus
    gamma = complex(gamma)
    kern = alt_generalized_poisson if alternative else generalized_poisson

    def K(parity, h):
        return kern(rp, parity, h, gamma)

    at_v0 = (K(MINUS, 1) + qp * K(MINUS, -1)) / (qp + 1)
    at_v1 = (qm * K(PLUS, 0) + K(PLUS, 2)) / (qm + 1)
    r0 = abs(at_v0 - gamma * K(PLUS, 0)) / max(abs(gamma * K(PLUS, 0)), 1e-300)
    r1 = abs(at_v1 - gamma * K(MINUS, 1)) / max(abs(gamma * K(MINUS, 1)), 1e-300)
    return {"residual_v0": r0, "residual_v1": r1}
