"""
Invariant suite behind ``semitree verify``.

Each check reduces to one number compared with a tolerance.  ``perturb``
multiplies every B value entering the checks by ``1 + perturb``; a correct
suite must then report failures, which is how the suite tests itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branch_kernels import (
    F_product_constant,
    _nhat,
    branch_data,
    endpoints,
    generalized_kernel_eigen_test,
    hitting_F,
)
from .oracle import F_series, eigen_residual, monte_carlo_hitting
from .spectra import abs_B, boundary_curve, non_ellipticity_residual, sigma_p, spectral_radius
from .spherical import arc_sum_eval, closed_form, gamma_squared_of_z, recurrence_eval
from .tree_core import MINUS, PLUS, TreeParams

P_GRID = (1.0, 1.2, 1.5, 2.0, 3.0, 6.0, math.inf)


@dataclass(frozen=True)
class CheckResult:
    name: str
    q_plus: int
    q_minus: int
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def rel_err(x, y) -> np.ndarray:
    """|x - y| / max(|x|, |y|), and 0 where both vanish."""
    x, y = np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
    scale = np.maximum(np.abs(x), np.abs(y))
    diff = np.abs(x - y)
    return np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), 0.0)


def sample_gammas(params: TreeParams, count: int, seed: int = 0,
                  r_min: float = 0.05, r_max: float = 3.0, cut_gap: float = 1e-3) -> np.ndarray:
    """``count`` random gamma with r_min <= |gamma| <= r_max, kept at least
    ``cut_gap`` away from the cuts and their endpoints."""
    rng = np.random.default_rng(seed)
    e = endpoints(params)
    out = []
    while len(out) < count:
        r = rng.uniform(r_min, r_max)
        g = r * np.exp(1j * rng.uniform(0, 2 * np.pi))
        x = abs(g.real)
        if abs(g.imag) < cut_gap and e.a - cut_gap <= x <= e.b + cut_gap:
            continue
        out.append(complex(g))
    return np.array(out)


def cut_gammas(params: TreeParams, count: int, seed: int = 0) -> np.ndarray:
    """Real points strictly inside the cuts, both signs."""
    rng = np.random.default_rng(seed)
    e = endpoints(params)
    x = rng.uniform(e.a, e.b, count)
    return np.where(rng.random(count) < 0.5, -x, x).astype(complex)


def identity_residuals(params: TreeParams, gammas, perturb: float = 0.0) -> dict:
    """Worst relative residuals of the algebraic identities over ``gammas``."""
    worst = dict.fromkeys(("reciprocity", "F_product", "quadratic", "resolvent"), 0.0)
    qbar = params.qbar
    s = params.q_plus + params.q_minus
    for g in gammas:
        d = branch_data(params, g)
        B = d.B * (1 + perturb)
        worst["reciprocity"] = max(worst["reciprocity"], abs(B * d.Bt - 1))
        lin = (_nhat(params, g) - s) / qbar
        worst["quadratic"] = max(
            worst["quadratic"], abs(B * B - lin * B + 1) / max(abs(B * B), abs(lin * B), 1))
        for sign in (PLUS, MINUS):
            c = F_product_constant(params, sign)
            worst["F_product"] = max(worst["F_product"], abs(d.F(sign) * d.Ft(sign) - c) / c)
            q_s = params.degree(sign)
            lhs = g * d.F(sign)
            rhs = (1 + q_s * B / qbar) / (q_s + 1)
            worst["resolvent"] = max(worst["resolvent"], float(rel_err(lhs, rhs)))
    return worst


def triple_agreement(params: TreeParams, gammas, n_max: int = 40) -> float:
    """Worst pairwise relative disagreement of the three spherical evaluators."""
    n = np.arange(n_max + 1)
    worst = 0.0
    for g in gammas:
        c = closed_form(params, g, n)
        r = recurrence_eval(params, g, n_max).values
        a = np.array([arc_sum_eval(params, g, k) for k in n])
        worst = max(worst, rel_err(c, r).max(), rel_err(c, a).max(), rel_err(r, a).max())
    return float(worst)


def boundary_B_deviation(params: TreeParams, p, samples: int = 64, perturb: float = 0.0) -> float:
    """max | 1/|B| - qbar^|1 - 2/p| | over the boundary curve of S_p.

    Our branch has |B| <= 1, so on the boundary |B| = qbar^-c; the reciprocal
    is the value of |B| on the other determination.
    """
    c = abs(1 - 2 / p) if math.isfinite(p) else 1.0
    target = params.qbar ** c
    pts = boundary_curve(params, p, samples).points()
    vals = np.array([1 / (abs_B(params, g) * abs(1 + perturb)) for g in pts])
    return float(np.max(np.abs(vals - target)))


def geometry_residuals(params: TreeParams) -> dict:
    e = endpoints(params)
    foci = 0.0
    for p in P_GRID:
        lo, hi = sigma_p(params, p).foci
        foci = max(foci, abs(lo - e.a ** 2), abs(hi - e.b ** 2))
    expected = ((params.q_plus - params.q_minus)
                / ((params.q_plus + 1) * (params.q_minus + 1))) ** 2
    return {
        "foci": foci,
        "radius_1": abs(spectral_radius(params, 1) - 1),
        "radius_inf": abs(spectral_radius(params, math.inf) - 1),
        "radius_2": abs(spectral_radius(params, 2) - e.b),
        "non_ellipticity": max(abs(non_ellipticity_residual(params, p) - expected)
                               for p in P_GRID),
    }


def special_gammas(params: TreeParams) -> list[complex]:
    e = endpoints(params)
    pts = [e.a, -e.a, e.b, -e.b]
    if not params.homogeneous:
        pts.append(0.0)
    return [complex(x) for x in pts]


def run_suite(pairs, samples: int = 200, depth: int = 8, walks: int = 20_000,
              seed: int = 0, tol: float | None = None, perturb: float = 0.0) -> list[CheckResult]:
    """Run every check on every parameter pair; results in a fixed order."""
    out = []
    t_ident = tol if tol is not None else 1e-10
    t_tight = tol if tol is not None else 1e-12
    for params in pairs:
        qp, qm = params.q_plus, params.q_minus

        def add(name, value, tolerance):
            out.append(CheckResult(name, qp, qm, float(value), float(tolerance)))

        gam = sample_gammas(params, samples, seed)
        for name, v in identity_residuals(params, gam, perturb).items():
            add(name, v, t_ident)
        add("triple_agreement", triple_agreement(params, gam[: min(samples, 40)]),
            tol if tol is not None else 1e-9)
        eig_g = np.concatenate([gam[:6], cut_gammas(params, 4, seed), special_gammas(params)])
        add("eigen_residual", np.max(eigen_residual(params, eig_g, depth)), t_ident)
        for sign, label in ((PLUS, "+"), (MINUS, "-")):
            s = F_series(params, sign, 2.0, 200)
            add(f"series_F{label}", abs(s.partial_sum - hitting_F(params, 2.0, sign)),
                tol if tol is not None else 1e-8)
            mc = monte_carlo_hitting(params, sign, walks, seed=seed)
            exact = hitting_F(params, 1.0, sign).real
            add(f"monte_carlo_F{label}_sigmas", abs(mc.estimate - exact) / mc.stderr, 3.0)
        for name, v in geometry_residuals(params).items():
            add(name, v, t_tight)
        add("boundary_abs_B", max(boundary_B_deviation(params, p, 32, perturb)
                                  for p in P_GRID), tol if tol is not None else 1e-9)
        z = 0.3 + 0.1j
        k = generalized_kernel_eigen_test(params, np.sqrt(gamma_squared_of_z(params, z)))
        add("generalized_kernel", max(k.values()), t_ident)
    return out
