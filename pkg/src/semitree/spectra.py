"""
lp spectra of mu2, mu1^2 and mu1 on T(q+, q-).

Write ``c_p = |1 - 2/p|``.  A non-zero gamma belongs to the lp spectrum of
mu1 exactly when ``|log_qbar |B(gamma)|| <= c_p``.  With
``delta = (N - q+ - q-)/(2 qbar)`` one has ``B + 1/B = 2 delta``, so the
level set ``|B| = qbar^c`` is the ellipse ``|delta + 1| + |delta - 1| =
qbar^c + qbar^-c``.  In the gamma^2 plane this is an ellipse Sigma_p with
foci a^2, b^2; the mu1 spectrum S_p is its square root, which is not an
ellipse unless q+ = q-.

For p = 2 the ellipse collapses to the segment [a^2, b^2] and the spectrum
is [-b, -a] U [a, b], plus the isolated eigenvalue 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branch_kernels import _nhat, _root_R_unchecked, endpoints, in_cut, BranchCutError
from .spherical import _endpoint_kind
from .tree_core import PLUS, TreeParams, _check_parity

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"

BOUNDARY_TOL = 1e-12


def parse_p(p) -> float:
    """Accept a real p >= 1, ``math.inf`` or the string ``"inf"``."""
    if isinstance(p, str):
        p = float(p.strip().lower().replace("infinity", "inf"))
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be in [1, inf], got {p}")
    return p


def conjugate_exponent(p) -> float:
    """p' = p/(p - 1), with 1' = inf and inf' = 1."""
    p = parse_p(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def level_exponent(p) -> float:
    """c_p = |1 - 2/p|, the admissible range of |log_qbar |B||."""
    return abs(1 - 2 * _inv(parse_p(p)))


@dataclass(frozen=True)
class EllipseRegion:
    """Closed elliptical region with horizontal major axis.

    Attributes
    ----------
    center : complex
    semi_axis_real, semi_axis_imag : float
        Horizontal and vertical semi-axes, ``semi_axis_real >= semi_axis_imag``.
    foci : tuple of complex
    """

    center: complex
    semi_axis_real: float
    semi_axis_imag: float
    foci: tuple[complex, complex]

    @classmethod
    def from_axes(cls, center, alpha, beta):
        c = math.sqrt(max(alpha * alpha - beta * beta, 0.0))
        center = complex(center)
        return cls(center, alpha, beta, (center - c, center + c))

    def verdict(self, w, tol: float = BOUNDARY_TOL) -> str:
        """Classify ``w`` against the region by the focal-distance sum."""
        w = complex(w)
        f1, f2 = self.foci
        total = abs(w - f1) + abs(w - f2)
        target = 2 * self.semi_axis_real
        if abs(total - target) <= tol * max(target, 1e-300):
            return BOUNDARY
        return INSIDE if total < target else OUTSIDE

    def point(self, theta):
        """Boundary point at parameter ``theta``."""
        theta = np.asarray(theta)
        return self.center + self.semi_axis_real * np.cos(theta) + 1j * self.semi_axis_imag * np.sin(theta)


def Gamma_of_z(params: TreeParams, z, side: int = PLUS) -> complex:
    """Eigenvalue of mu2 on l(V+-) attached to z.

    Gamma+-(z) = (qbar^(2z) + qbar^(2(1-z)) + q-+ - 1) / ((q+- + 1) q-+).
    """
    side = _check_parity(side)
    q_s, q_o = params.degree(side), params.degree(-side)
    z = complex(z)
    prod = params.product
    return (prod ** z + prod ** (1 - z) + q_o - 1) / ((q_s + 1) * q_o)


def mu2_region(params: TreeParams, p, side: int = PLUS) -> EllipseRegion:
    """lp spectrum of mu2 on the functions on V+ (side=+1) or V- (side=-1)."""
    side = _check_parity(side)
    p = parse_p(p)
    q_s, q_o = params.degree(side), params.degree(-side)
    den = (q_s + 1) * q_o
    u, v = _axis_terms(params, p)
    return EllipseRegion.from_axes((q_o - 1) / den, (u + v) / den, abs(u - v) / den)


def _axis_terms(params: TreeParams, p: float) -> tuple[float, float]:
    """qbar^(2/p) and qbar^(2 - 2/p), computed as powers of q+ q-."""
    t = _inv(p)
    prod = float(params.product)
    return prod ** t, prod ** (1 - t)


def sigma_p(params: TreeParams, p) -> EllipseRegion:
    """lp spectrum Sigma_p of mu1^2 (the same on V+ and V-).

    Center (q+ + q-)/D, semi-axes (qbar^(2/p) +- qbar^(2-2/p))/D with
    D = (q+ + 1)(q- + 1); the foci a^2, b^2 do not depend on p.
    """
    p = parse_p(p)
    qp, qm = params.q_plus, params.q_minus
    den = (qp + 1) * (qm + 1)
    u, v = _axis_terms(params, p)
    eta = (qp + qm) / den
    alpha = (u + v) / den
    beta = abs(u - v) / den
    half = 2 * params.qbar / den
    return EllipseRegion(complex(eta), alpha, beta, (complex(eta - half), complex(eta + half)))


def non_ellipticity_residual(params: TreeParams, p) -> float:
    """eta^2 + beta^2 - alpha^2 for Sigma_p; zero exactly when q+ = q-."""
    s = sigma_p(params, p)
    return s.center.real ** 2 + s.semi_axis_imag ** 2 - s.semi_axis_real ** 2


def abs_B(params: TreeParams, gamma) -> float:
    """|B(gamma)|, continuous across the cuts (where it equals 1).

    This branch has |B| <= 1 everywhere.  Within relative distance
    ``ENDPOINT_TOL`` of +-a, +-b the value is the exact endpoint value 1:
    there |B| - 1 behaves like the square root of the distance, so rounding
    in gamma alone would cost half the available digits.
    """
    gamma = complex(gamma)
    if _endpoint_kind(params, gamma) != "none":
        return 1.0
    nh = _nhat(params, gamma)
    R = complex(_root_R_unchecked(params, gamma))
    s = params.q_plus + params.q_minus
    small, large = nh - s - R, nh - s + R
    # B Bt = 1; divide by whichever numerator does not cancel
    if abs(small) >= abs(large):
        return abs(small) / (2 * params.qbar)
    return 2 * params.qbar / abs(large)


@dataclass(frozen=True)
class SpectrumQuery:
    """Result of a membership test for the lp spectrum of mu1.

    ``includes_isolated_zero`` is set when gamma = 0 is in the spectrum as
    an isolated eigenvalue outside the elliptical part.  ``note`` records
    the case q+ > q-, p != 2, where the status of 0 is left open.
    """

    p: float
    gamma: complex
    verdict: str
    includes_isolated_zero: bool = False
    note: str = ""

    @property
    def in_spectrum(self) -> bool:
        return self.verdict in (INSIDE, BOUNDARY)


def _ellipse_functional(params: TreeParams, gamma: complex) -> float:
    delta = (_nhat(params, gamma) - (params.q_plus + params.q_minus)) / (2 * params.qbar)
    return abs(delta + 1) + abs(delta - 1)


def membership(params: TreeParams, p, gamma, tol: float = BOUNDARY_TOL) -> SpectrumQuery:
    """Decide whether gamma lies in the lp spectrum S_p of mu1.

    Parameters
    ----------
    params : TreeParams
    p : float or "inf"
    gamma : complex
    tol : float
        Relative width of the ``boundary`` band.

    Returns
    -------
    SpectrumQuery
    """
    p = parse_p(p)
    gamma = complex(gamma)
    rp = params.rooted()
    c = level_exponent(p)
    if c == 0.0:
        verdict = _l2_verdict(rp, gamma, tol)
    else:
        threshold = rp.qbar ** c + rp.qbar ** (-c)
        value = _ellipse_functional(rp, gamma)
        if abs(value - threshold) <= tol * threshold:
            verdict = BOUNDARY
        else:
            verdict = INSIDE if value < threshold else OUTSIDE
    if gamma != 0 or verdict != OUTSIDE:
        return SpectrumQuery(p, gamma, verdict)
    # gamma = 0 outside the elliptical part
    if rp.q_plus < rp.q_minus:
        return SpectrumQuery(p, gamma, INSIDE, includes_isolated_zero=True)
    return SpectrumQuery(
        p, gamma, OUTSIDE,
        note="undetermined: the lp status of 0 for q+ > q-, p != 2 is not settled",
    )


def _l2_verdict(params: TreeParams, gamma: complex, tol: float) -> str:
    if gamma == 0:
        return INSIDE
    e = endpoints(params)
    if abs(gamma.imag) > tol * max(1.0, abs(gamma.real)):
        return OUTSIDE
    x = abs(gamma.real)
    for end in (e.a, e.b):
        if end > 0 and abs(x - end) <= tol * end:
            return BOUNDARY
    return INSIDE if e.a < x < e.b else OUTSIDE


@dataclass(frozen=True)
class BoundaryCurve:
    """Boundary of S_p: the curve in the gamma^2 plane and its two square roots."""

    p: float
    theta: np.ndarray
    gamma2: np.ndarray
    sheet1: np.ndarray
    sheet2: np.ndarray

    def points(self) -> np.ndarray:
        return np.concatenate([self.sheet1, self.sheet2])


def boundary_curve(params: TreeParams, p, samples: int = 256) -> BoundaryCurve:
    """Sample the boundary curve of S_p.

    In the gamma^2 plane the boundary is
    ``eta + (2 qbar / D) (cosh(c L) cos t + i sinh(c L) sin t)`` with
    ``c = 1 - 2/p``, ``L = ln qbar``; both square roots of each point are
    emitted (``sheet2 = -sheet1``).
    """
    if samples < 8:
        raise ValueError("need at least 8 samples")
    p = parse_p(p)
    qp, qm = params.q_plus, params.q_minus
    den = (qp + 1) * (qm + 1)
    theta = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    c = 1 - 2 * _inv(p)
    scale = 2 * params.qbar / den
    log_q = math.log(params.qbar)
    gamma2 = ((qp + qm) / den + scale * math.cosh(c * log_q) * np.cos(theta)
              + 1j * scale * math.sinh(c * log_q) * np.sin(theta))
    sheet1 = np.sqrt(gamma2)
    return BoundaryCurve(p, theta, gamma2, sheet1, -sheet1)


def spectral_radius(params: TreeParams, p) -> float:
    """Spectral radius of mu1 on lp(V)."""
    p = parse_p(p)
    qp, qm = params.q_plus, params.q_minus
    u, v = _axis_terms(params, p)
    return math.sqrt((qp + qm + u + v) / ((qp + 1) * (qm + 1)))


def p_crit(params: TreeParams) -> float:
    """ln(q+ q-)/ln q-, the summability threshold of phi(., v0 | 0), v0 in V+."""
    rp = params.rooted()
    return math.log(rp.product) / math.log(rp.q_minus)


def split_exponent(params: TreeParams) -> float:
    """ln(q+ q-)/ln max(q+, q-): S_p is disconnected exactly for
    split < p < split'."""
    return math.log(params.product) / math.log(max(params.q_plus, params.q_minus))


def is_connected(params: TreeParams, p) -> bool:
    """Whether S_p (isolated zero aside) is connected."""
    p = parse_p(p)
    if params.homogeneous:
        return True
    s = split_exponent(params)
    return not (s < p < conjugate_exponent(s))


@dataclass(frozen=True)
class LpRange:
    """Set of p in [1, inf] with phi(., v0 | gamma) in lp(V).

    The set is ``(lower, inf]`` when ``bounded``; ``lower = inf`` means
    bounded but in no lp with p finite; ``bounded = False`` means empty.
    """

    lower: float
    bounded: bool
    reason: str = ""

    def contains(self, p) -> bool:
        p = parse_p(p)
        if not self.bounded:
            return False
        if math.isinf(p):
            return True
        return p > self.lower


def log_abs_B(params: TreeParams, gamma) -> float:
    """log_qbar |B(gamma)|."""
    return math.log(abs_B(params, gamma)) / math.log(params.qbar)


def lp_range_of_spherical(params: TreeParams, gamma) -> LpRange:
    """Exponents p for which the spherical function phi(., v0 | gamma) is p-summable.

    Off the cuts and away from 0, phi is in lp exactly when
    ``|log_qbar |B|| < 1 - 2/p``.  At the endpoints +-a, +-b (|B| = 1, with
    a linear factor in n) the answer is p > 2 as well, since n qbar^(-n/2)
    is p-summable against sphere growth qbar^n for every p > 2.  At
    gamma = 0 the spherical function is (-1/q-)^(n/2) on even spheres and
    the threshold is p_crit.
    """
    rp = params.rooted()
    gamma = complex(gamma)
    if gamma == 0:
        return LpRange(p_crit(rp), True, "zero eigenvalue")
    if in_cut(rp, gamma):
        raise BranchCutError(f"gamma={gamma} lies on a cut")
    ell = abs(log_abs_B(rp, gamma))
    if ell > 1 + 1e-14:
        return LpRange(math.inf, False, "exponential growth beyond qbar^(n/2)")
    if ell >= 1 - 1e-14:
        return LpRange(math.inf, True, "bounded, no finite p")
    return LpRange(2 / (1 - ell), True, "")
