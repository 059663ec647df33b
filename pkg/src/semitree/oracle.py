"""
Brute-force ground truth for the closed formulas.

The isotropic walk seen from a fixed target vertex is a birth-death chain on
the distance d: from distance d >= 1 it steps down with probability
1/(q(d) + 1) and up with probability q(d)/(q(d) + 1), where q(d) is the
forward degree of the vertex class at distance d.  Everything here is
computed from that chain or from explicit truncated trees, never from the
closed forms:

* exact first-passage and return probabilities (integer dynamic programming);
* their generating functions F(gamma) and G(gamma) as truncated series;
* Monte Carlo hitting frequencies with a deterministic block-seeding scheme;
* vertex-level residuals of mu1 f = gamma f on a truncated tree;
* growth of lp partial sums of a spherical function over spheres.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numba
import numpy as np

from .branch_kernels import endpoints
from .spherical import recurrence_eval
from .tree_core import (
    PLUS,
    TreeParams,
    _check_parity,
    cached_tree,
    sphere_cardinality,
)

MAX_SERIES_ORDER = 20_000
DEFAULT_CAP = 10_000
DEFAULT_BLOCK = 8192


class SeriesDivergenceWarning(RuntimeWarning):
    """The truncated series does not converge at the requested point."""


# ---------------------------------------------------------------------------
# exact distance-chain dynamic programming


@dataclass(frozen=True)
class BirthDeathChain:
    """Distance-to-target chain with the start vertex of class ``start_parity``
    at distance ``start``."""

    params: TreeParams
    start_parity: int
    start: int = 1

    def degree_at(self, d: int) -> int:
        """Forward degree of the vertex class found at distance d."""
        cls = self.start_parity if (d - self.start) % 2 == 0 else -self.start_parity
        return self.params.degree(cls)

    def step_probabilities(self, d: int) -> tuple[Fraction, Fraction]:
        """(down, up) probabilities from distance d >= 1."""
        q = self.degree_at(d)
        return Fraction(1, q + 1), Fraction(q, q + 1)


def _chain_counts(chain: BirthDeathChain, steps: int, absorb: bool):
    """Integer path weights of the distance chain.

    All states reached after j steps share one vertex class, so their
    probabilities share the denominator prod_{i<j} (q_i + 1).  Yields
    (denominator, weights) for j = 0..steps, with weights indexed by d.
    Moves out of distance 0 (possible only without absorption) fan out
    over all q + 1 neighbours.
    """
    size = chain.start + steps + 2
    w = [0] * size
    w[chain.start] = 1
    den = 1
    yield den, w
    for j in range(steps):
        cls_d = chain.start + j  # any reachable distance has this parity
        q = chain.degree_at(cls_d)
        new = [0] * size
        lo = max(0, chain.start - j)
        hi = min(size - 1, chain.start + j + 1)
        for d in range(lo, hi):
            x = w[d]
            if not x:
                continue
            if d == 0:
                new[1] += x * (q + 1)
            else:
                new[d - 1] += x
                new[d + 1] += x * q
        den *= q + 1
        w = new
        if absorb:
            yield den, w
            w[0] = 0
        else:
            yield den, w


@lru_cache(maxsize=64)
def first_passage_coefficients(params: TreeParams, start_parity: int, N: int) -> tuple[Fraction, ...]:
    """Exact first-visit probabilities f^(n), n = 0..N.

    ``f[n]`` is the probability that the walk started at a vertex of class
    ``start_parity`` first visits a fixed neighbour at step n (``f[0] = 0``).
    There is no truncation error: a path of length n never goes beyond
    distance n.

    Examples
    --------
    >>> f = first_passage_coefficients(TreeParams(5, 2), +1, 3)
    >>> f[1], f[2]
    (Fraction(1, 6), Fraction(0, 1))
    """
    _check_parity(start_parity)
    if N < 1:
        raise ValueError("N must be at least 1")
    if N > MAX_SERIES_ORDER:
        from .tree_core import CapacityError

        raise CapacityError(f"series order {N} exceeds {MAX_SERIES_ORDER}")
    chain = BirthDeathChain(params, start_parity, 1)
    out = []
    for den, w in _chain_counts(chain, N, absorb=True):
        out.append(Fraction(w[0], den))
    return tuple(out)


@lru_cache(maxsize=64)
def return_probabilities(params: TreeParams, N: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact n-step probabilities from v0 of being at v0 and at distance 1."""
    rp = params.rooted()
    chain = BirthDeathChain(rp, PLUS, 0)
    at0, at1 = [], []
    for den, w in _chain_counts(chain, N, absorb=False):
        at0.append(Fraction(w[0], den))
        at1.append(Fraction(w[1], den))
    return tuple(at0), tuple(at1)


@dataclass(frozen=True)
class SeriesEstimate:
    """Truncated power series in 1/gamma with a tail bound."""

    coefficients: tuple[Fraction, ...]
    gamma: complex
    partial_sum: complex
    tail_bound: float


def _tail_bound(terms: np.ndarray, ratio_limit: float) -> float:
    """Geometric bound on the omitted terms, from the last non-zero terms."""
    nz = np.flatnonzero(np.abs(terms) > 0)
    if len(nz) < 2:
        return 0.0
    last, prev = nz[-1], nz[-2]
    step = last - prev
    observed = abs(terms[last]) / abs(terms[prev])
    r = max(observed, ratio_limit ** step)
    if r >= 1:
        return math.inf
    return float(abs(terms[last]) * r / (1 - r))


def F_series(params: TreeParams, start_parity: int, gamma, N: int = 200) -> SeriesEstimate:
    """Partial sum of F(gamma) = sum_n f^(n) gamma^(-n) for the start class.

    Converges for |gamma| > b; the result should agree with
    ``hitting_F(params, gamma, start_parity)`` within the tail bound.

    Warns
    -----
    SeriesDivergenceWarning
        If |gamma| <= b or the terms stop decreasing.
    """
    gamma = complex(gamma)
    coeffs = first_passage_coefficients(params, start_parity, N)
    b = endpoints(params).b
    if abs(gamma) <= b:
        warnings.warn(f"|gamma| <= b = {b:.6g}: the series diverges", SeriesDivergenceWarning)
    inv = 1 / gamma
    powers = inv ** np.arange(N + 1)
    terms = np.array([float(c) for c in coeffs]) * powers
    tail = _tail_bound(terms, b / abs(gamma))
    if math.isinf(tail):
        warnings.warn("terms fail the ratio test", SeriesDivergenceWarning)
    return SeriesEstimate(coeffs, gamma, complex(terms.sum()), tail)


@dataclass(frozen=True)
class GreenEstimate:
    """Series values of G(v0, v0 | gamma) and G(w, v0 | gamma), w ~ v0."""

    gamma: complex
    diagonal: complex
    neighbour: complex
    tail_bound: float

    def resolvent_residual(self) -> float:
        """|gamma G(v0,v0) - 1 - G(w,v0)|, the resolvent equation at v0."""
        return abs(self.gamma * self.diagonal - 1 - self.neighbour)


def green_series(params: TreeParams, gamma, N: int = 200) -> GreenEstimate:
    """Green function at v0 as sum_n p^(n)(v0, v0) gamma^(-n-1).

    The neighbour value uses reversibility: with m(v) = q_v + 1,
    p^(n)(w, v0) = m(v0)/m(w) p^(n)(v0, w), and p^(n)(v0, w) is the
    probability of being at distance 1 divided by the number of neighbours.
    """
    gamma = complex(gamma)
    rp = params.rooted()
    at0, at1 = return_probabilities(rp, N)
    b = endpoints(rp).b
    if abs(gamma) <= b:
        warnings.warn(f"|gamma| <= b = {b:.6g}: the series diverges", SeriesDivergenceWarning)
    powers = (1 / gamma) ** np.arange(1, N + 2)
    t0 = np.array([float(c) for c in at0]) * powers
    t1 = np.array([float(c) for c in at1]) * powers / (rp.q_minus + 1)
    tail = max(_tail_bound(t0, b / abs(gamma)), _tail_bound(t1, b / abs(gamma)))
    if math.isinf(tail):
        warnings.warn("terms fail the ratio test", SeriesDivergenceWarning)
    return GreenEstimate(gamma, complex(t0.sum()), complex(t1.sum()), tail)


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class MonteCarloResult:
    """Hitting frequency with its binomial standard error.

    ``unabsorbed`` is the fraction of walks still running at the cap; it is
    not folded into the estimate.
    """

    estimate: float
    stderr: float
    unabsorbed: float
    hits: int
    walks: int


def _block_seed(seed: int, block: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=seed & (2 ** 64 - 1), spawn_key=(block,))


def _simulate_block(params: TreeParams, start_parity: int, n: int, cap: int,
                    seed_seq: np.random.SeedSequence) -> tuple[int, int]:
    """Run ``n`` distance chains from distance 1; return (hits, unfinished).

    Far from the target the walk is advanced L = 2m <= d - 1 steps at once:
    the m two-step increments (-2, 0, +2) are i.i.d. because every
    intermediate distance stays >= 1, so one multinomial draw is exact.
    """
    rng = np.random.default_rng(seed_seq)
    q_start = params.degree(start_parity)
    q_other = params.degree(-start_parity)
    d = np.ones(n, dtype=np.int64)
    t = np.zeros(n, dtype=np.int64)
    hit = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)

    def two_step(q_here, q_next):
        down = 1 / ((q_here + 1) * (q_next + 1))
        up = q_here * q_next / ((q_here + 1) * (q_next + 1))
        return [down, 1 - down - up, up]

    # class at distance d is start_parity for odd d
    pv_odd = two_step(q_start, q_other)
    pv_even = two_step(q_other, q_start)
    while active.any():
        idx = np.flatnonzero(active)
        dd, tt = d[idx], t[idx]
        remaining = cap - tt
        leap = (dd >= 3) & (remaining >= 2)
        li = idx[leap]
        if li.size:
            L = np.minimum(d[li] - 1, cap - t[li])
            m = L // 2
            odd = d[li] % 2 == 1
            for mask, pv in ((odd, pv_odd), (~odd, pv_even)):
                sel = li[mask]
                if sel.size:
                    draws = rng.multinomial(m[mask], pv)
                    d[sel] += 2 * (draws[:, 2] - draws[:, 0])
                    t[sel] += 2 * m[mask]
        si = idx[~leap]
        if si.size:
            q_here = np.where(d[si] % 2 == 1, q_start, q_other)
            down = rng.random(si.size) < 1.0 / (q_here + 1)
            d[si] += np.where(down, -1, 1)
            t[si] += 1
            newly = si[d[si] == 0]
            hit[newly] = True
            active[newly] = False
        active &= t < cap
    hits = int(hit.sum())
    return hits, n - hits


def monte_carlo_hitting(params: TreeParams, start_parity: int, walks: int = 100_000,
                        cap: int = DEFAULT_CAP, seed: int = 0,
                        block_size: int = DEFAULT_BLOCK, workers: int = 1) -> MonteCarloResult:
    """Fraction of walks from a vertex of class ``start_parity`` that ever hit a
    fixed neighbour, within ``cap`` steps.

    Walks are split into fixed blocks of ``block_size``; block ``i`` draws
    from ``SeedSequence(seed, spawn_key=(i,))``.  The result therefore does
    not depend on ``workers``.
    """
    _check_parity(start_parity)
    if walks < 1 or cap < 1:
        raise ValueError("walks and cap must be positive")
    sizes = [block_size] * (walks // block_size)
    if walks % block_size:
        sizes.append(walks % block_size)

    def run(i):
        return _simulate_block(params, start_parity, sizes[i], cap, _block_seed(seed, i))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(len(sizes))))
    else:
        results = [run(i) for i in range(len(sizes))]
    hits = sum(h for h, _ in results)
    est = hits / walks
    unabsorbed = (walks - hits) / walks
    return MonteCarloResult(est, math.sqrt(est * (1 - est) / walks), unabsorbed, hits, walks)


# ---------------------------------------------------------------------------
# vertex-level eigen-residual


@numba.njit(cache=True)
def _residual_sweep(level, parent, child_start, child_count, n_interior, by_level, gammas):
    # by_level[n, g] is the profile value at distance n for gammas[g].  The
    # neighbours of each vertex are tallied by their distance from v0, read
    # off the parent and child lists, and the tallies weight the values.
    G = gammas.shape[0]
    L = by_level.shape[0]
    gf = np.empty((L, G), dtype=np.complex128)
    weight = np.empty((L, G))
    for n in range(L):
        for g in range(G):
            gf[n, g] = gammas[g] * by_level[n, g]
            weight[n, g] = 1.0 / (1.0 + abs(gf[n, g])) ** 2
    worst = np.zeros(G)
    tally = np.zeros(L, dtype=np.int64)
    for v in range(n_interior):
        p = parent[v]
        if p >= 0:
            tally[level[p]] += 1
        c0 = child_start[v]
        for c in range(c0, c0 + child_count[v]):
            tally[level[c]] += 1
        inv_deg = 1.0 / (child_count[v] + (1 if p >= 0 else 0))
        lv = level[v]
        lo = max(lv - 1, 0)
        hi = min(lv + 2, L)
        for g in range(G):
            s = 0j
            for n in range(lo, hi):
                s += tally[n] * by_level[n, g]
            d = s * inv_deg - gf[lv, g]
            r2 = (d.real * d.real + d.imag * d.imag) * weight[lv, g]
            if r2 > worst[g]:
                worst[g] = r2
        # any tally outside [lv-1, lv+1] would mean a malformed tree
        for n in range(L):
            if tally[n] != 0 and (n < lo or n >= hi):
                worst[:] = np.inf
            tally[n] = 0
    return np.sqrt(worst)


def eigen_residual(params: TreeParams, gamma, N: int = 12):
    """Max over interior vertices of |mu1 f - gamma f| / (1 + |gamma f|).

    f is the radial profile from :func:`recurrence_eval` placed on every
    vertex of the explicit ball of radius N; mu1 is evaluated vertex by
    vertex from the parent and child lists.  ``gamma`` may be an array.
    """
    gam = np.atleast_1d(np.asarray(gamma, dtype=complex))
    tree = cached_tree(params, N)
    by_level = np.ascontiguousarray(
        np.stack([recurrence_eval(params, g, N).values for g in gam], axis=1))
    n_in = int(np.searchsorted(tree.level, N))
    out = _residual_sweep(tree.level, tree.parent, tree.child_start, tree.child_count,
                          n_in, by_level, gam)
    return float(out[0]) if np.ndim(gamma) == 0 else out


# ---------------------------------------------------------------------------
# lp growth diagnostic


@dataclass(frozen=True)
class LpDiagnostic:
    """Growth of S_n = sum_{m<=n} |S_m| |f_m|^p.

    ``log_partial_sums[n]`` is ln S_n; ``ratio`` is the fitted growth factor
    of the terms per two steps; ``verdict`` is ``"summable"``,
    ``"not summable"`` or ``"inconclusive"``.
    """

    p: float
    log_partial_sums: np.ndarray
    ratio: float
    verdict: str


def _log_profile(params: TreeParams, gamma: complex, N: int) -> np.ndarray:
    """ln |f_n| by the radial recursion with periodic rescaling."""
    rp = params.rooted()
    out = np.full(N + 1, -np.inf)
    prev, cur, shift = 1 + 0j, gamma, 0.0
    out[0] = 0.0
    if N >= 1:
        out[1] = math.log(abs(gamma)) if gamma != 0 else -np.inf
    for n in range(1, N):
        q = rp.q_plus if n % 2 == 0 else rp.q_minus
        nxt = ((q + 1) * gamma * cur - prev) / q
        prev, cur = cur, nxt
        size = max(abs(prev), abs(cur))
        if size > 1e100 or 0 < size < 1e-100:
            prev, cur = prev / size, cur / size
            shift += math.log(size)
        out[n + 1] = math.log(abs(cur)) + shift if cur != 0 else -np.inf
    return out


def lp_partial_sums(params: TreeParams, gamma, p: float, N: int = 400,
                    margin: float = 0.02, window: int = 40) -> LpDiagnostic:
    """Empirical p-summability of the spherical function over spheres.

    The growth ratio compares the largest term in the last ``window``
    distances with the largest in the window before, which is robust to the
    oscillation of |f_n| on the spectrum.
    """
    if not (1 <= p < math.inf):
        raise ValueError("p must be finite and >= 1")
    gamma = complex(gamma)
    rp = params.rooted()
    logf = _log_profile(rp, gamma, N)
    n = np.arange(N + 1)
    log_card = np.array([math.log(sphere_cardinality(rp, PLUS, int(m))) for m in n])
    log_terms = log_card + p * logf
    log_sums = np.logaddexp.accumulate(log_terms)
    last = log_terms[N - window + 1:]
    before = log_terms[N - 2 * window + 1:N - window + 1]
    if np.all(np.isneginf(last)):
        ratio = 0.0
    else:
        ratio = math.exp((last.max() - before.max()) * 2 / window)
    if abs(ratio - 1) < margin:
        verdict = "inconclusive"
    else:
        verdict = "summable" if ratio < 1 else "not summable"
    return LpDiagnostic(p, log_sums, ratio, verdict)
