"""
Exact combinatorics of the semi-homogeneous tree T(q+, q-).

Vertices alternate between two classes: V+ (q+ + 1 neighbours) and
V- (q- + 1 neighbours).  The reference vertex v0 sits in V+ unless
``root_parity`` says otherwise.  Boundary points are never materialized;
everything about the boundary reduces to the pair (k, n) of a path
v0 .. vn and the closest-vertex index k on it.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

PLUS = 1
MINUS = -1

# Vertex budget for explicit trees (about 0.5 GB of index arrays).
DEFAULT_MAX_VERTICES = 40_000_000


class CapacityError(RuntimeError):
    """Raised when an explicit construction would exceed the vertex budget."""


def _check_parity(parity: int) -> int:
    if parity not in (PLUS, MINUS):
        raise ValueError(f"parity must be +1 or -1, got {parity!r}")
    return parity


@dataclass(frozen=True)
class TreeParams:
    """Homogeneity degrees of a semi-homogeneous tree.

    Parameters
    ----------
    q_plus, q_minus : int
        Forward degrees of the two vertex classes, both at least 2.
    root_parity : int
        Class of the reference vertex v0, ``+1`` (default) or ``-1``.
    """

    q_plus: int
    q_minus: int
    root_parity: int = PLUS

    def __post_init__(self):
        for name in ("q_plus", "q_minus"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise ValueError(f"{name} must be at least 2, got {value}")
            object.__setattr__(self, name, int(value))
        _check_parity(self.root_parity)

    @property
    def product(self) -> int:
        """q+ q-, the exact square of the geometric mean."""
        return self.q_plus * self.q_minus

    @property
    def qbar(self) -> float:
        """Geometric mean sqrt(q+ q-)."""
        return math.sqrt(self.product)

    @property
    def homogeneous(self) -> bool:
        return self.q_plus == self.q_minus

    def degree(self, parity: int) -> int:
        """Forward degree q of the class ``parity``."""
        return self.q_plus if _check_parity(parity) == PLUS else self.q_minus

    def parity_at(self, n: int, center: int | None = None) -> int:
        """Class of a vertex at distance ``n`` from a vertex of class ``center``."""
        center = self.root_parity if center is None else _check_parity(center)
        return center if n % 2 == 0 else -center

    def rooted(self) -> "TreeParams":
        """The same tree relabelled so that v0 lies in the ``+`` class.

        Every analytic formula in this package is written for v0 in V+;
        callers with ``root_parity=-1`` are served through this view.
        """
        if self.root_parity == PLUS:
            return self
        return TreeParams(self.q_minus, self.q_plus, PLUS)

    def swapped(self) -> "TreeParams":
        """Interchange q+ and q- (keeping the root class label)."""
        return TreeParams(self.q_minus, self.q_plus, self.root_parity)


def sphere_cardinality(params: TreeParams, parity: int, n: int) -> int:
    """Number of vertices at distance ``n`` from a vertex of class ``parity``.

    Parameters
    ----------
    params : TreeParams
    parity : int
        Class (+1 or -1) of the center vertex.
    n : int
        Radius, ``n >= 0``.

    Returns
    -------
    int
        1 for n = 0, (q_v + 1) qbar^(n-1) for odd n and
        (q_v + 1) qbar^(n-2) q~_v for even n > 0, in exact integers.
    """
    if n < 0:
        raise ValueError("radius must be non-negative")
    if n == 0:
        return 1
    q_v = params.degree(parity)
    q_other = params.degree(-parity)
    if n % 2 == 1:
        return (q_v + 1) * params.product ** ((n - 1) // 2)
    return (q_v + 1) * params.product ** ((n - 2) // 2) * q_other


def arc_measure(params: TreeParams, n: int) -> Fraction:
    """Equidistributed boundary measure of an arc Omega(v0, v), |v| = n."""
    return Fraction(1, sphere_cardinality(params, params.root_parity, n))


@dataclass(frozen=True)
class ArcPartition:
    """Measures of the arcs Omega_k(v0, vn), k = 0..n, of a path v0 .. vn.

    Omega_k collects the boundary points whose closest vertex on the path
    is v_k.  The measures are exact rationals summing to one.
    """

    n: int
    measures: tuple[Fraction, ...]

    def as_float(self) -> np.ndarray:
        return np.array([float(m) for m in self.measures])


def arc_partition(params: TreeParams, n: int) -> ArcPartition:
    """Exact closest-vertex partition of the boundary along a path of length ``n``.

    Parameters
    ----------
    params : TreeParams
    n : int
        Path length, ``n >= 0``.

    Returns
    -------
    ArcPartition
        ``measures[k]`` is nu_{v0}(Omega_k(v0, vn)).
    """
    n = operator.index(n)
    if n < 0:
        raise ValueError("path length must be non-negative")
    if n == 0:
        return ArcPartition(0, (Fraction(1),))
    rp = params.rooted()
    qp, qm = rp.q_plus, rp.q_minus

    def scale(k: int) -> Fraction:
        # qbar^-k, times sqrt(q+/q-) when k is odd; always rational.
        if k % 2 == 0:
            return Fraction(1, (qp * qm) ** (k // 2))
        return Fraction(1, qp ** ((k - 1) // 2) * qm ** ((k + 1) // 2))

    out = [Fraction(qp, qp + 1)]
    for k in range(1, n):
        top = qp - 1 if k % 2 == 0 else qm - 1
        out.append(Fraction(top, qp + 1) * scale(k))
    top = qp if n % 2 == 0 else qm
    out.append(Fraction(top, qp + 1) * scale(n))
    return ArcPartition(n, tuple(out))


@lru_cache(maxsize=256)
def _arc_weights(params: TreeParams, n: int) -> np.ndarray:
    weights = arc_partition(params, n).as_float()
    weights.setflags(write=False)
    return weights


def horospherical_index(k: int, n: int) -> int:
    """Horospherical index 2k - n of a vertex at distance n whose closest
    vertex on [v0, omega) is the k-th one."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return 2 * k - n


def tree_size(params: TreeParams, depth: int) -> int:
    """Vertex count of the ball of radius ``depth`` around v0."""
    return sum(sphere_cardinality(params, params.root_parity, n) for n in range(depth + 1))


@dataclass(frozen=True, eq=False)
class TruncatedTree:
    """Explicit ball of radius ``depth`` around v0, vertices in BFS order.

    Attributes
    ----------
    params : TreeParams
    depth : int
    parent : int64 array
        Parent index, -1 at the root.
    level : int16 array
        Distance from the root.
    parity : int8 array
        Vertex class, +1 or -1.
    child_start, child_count : int64 arrays
        Children of vertex ``v`` are ``child_start[v] : child_start[v] + child_count[v]``.
    """

    params: TreeParams
    depth: int
    parent: np.ndarray = field(repr=False)
    level: np.ndarray = field(repr=False)
    parity: np.ndarray = field(repr=False)
    child_start: np.ndarray = field(repr=False)
    child_count: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return int(self.parent.shape[0])

    @property
    def interior(self) -> np.ndarray:
        """Mask of vertices whose full neighbourhood lies in the tree."""
        return self.level < self.depth

    def census(self) -> list[int]:
        return np.bincount(self.level, minlength=self.depth + 1).tolist()

    def lift(self, profile) -> np.ndarray:
        """Vertex values of a radial function given by ``profile[n]``."""
        profile = np.asarray(profile)
        return profile[self.level]


def build_truncated_tree(
    params: TreeParams, depth: int, max_vertices: int = DEFAULT_MAX_VERTICES
) -> TruncatedTree:
    """Build the ball of radius ``depth`` around v0 as flat BFS arrays.

    Raises
    ------
    CapacityError
        If the ball has more than ``max_vertices`` vertices; use
        :func:`tree_size` to check beforehand.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    total = tree_size(params, depth)
    if total > max_vertices:
        raise CapacityError(
            f"ball of radius {depth} has {total} vertices (limit {max_vertices})"
        )
    root_q = params.degree(params.root_parity)
    parent = np.empty(total, dtype=np.int64)
    level = np.empty(total, dtype=np.int16)
    parity = np.empty(total, dtype=np.int8)
    child_start = np.zeros(total, dtype=np.int64)
    child_count = np.zeros(total, dtype=np.int64)

    parent[0], level[0], parity[0] = -1, 0, params.root_parity
    lo, hi = 0, 1  # current level occupies [lo, hi)
    for n in range(depth):
        width = hi - lo
        if n == 0:
            per = root_q + 1
        else:
            per = params.degree(params.parity_at(n))
        child_count[lo:hi] = per
        child_start[lo:hi] = hi + per * np.arange(width, dtype=np.int64)
        new_hi = hi + per * width
        parent[hi:new_hi] = np.repeat(np.arange(lo, hi, dtype=np.int64), per)
        level[hi:new_hi] = n + 1
        parity[hi:new_hi] = params.parity_at(n + 1)
        lo, hi = hi, new_hi
    child_start[lo:hi] = hi
    for arr in (parent, level, parity, child_start, child_count):
        arr.setflags(write=False)
    return TruncatedTree(params, depth, parent, level, parity, child_start, child_count)


@lru_cache(maxsize=4)
def cached_tree(params: TreeParams, depth: int) -> TruncatedTree:
    """Memoized :func:`build_truncated_tree` for repeated oracle calls."""
    return build_truncated_tree(params, depth)


def _child_totals(tree: TruncatedTree, f: np.ndarray) -> np.ndarray:
    """Sum of f over the children of every vertex (0 on the frontier).

    Interior vertices form a BFS prefix whose child blocks are contiguous
    and adjacent, so one ``reduceat`` over the block starts suffices.  Each
    sum touches only its own block, unlike prefix-sum differences.
    """
    out = np.zeros(tree.size, dtype=f.dtype)
    n_in = int(np.searchsorted(tree.level, tree.depth))
    if n_in == 0:
        return out
    starts = tree.child_start[:n_in]
    stop = starts[-1] + tree.child_count[n_in - 1]
    out[:n_in] = np.add.reduceat(f[starts[0]:stop], starts - starts[0])
    return out


def _neighbour_sums(tree: TruncatedTree, f: np.ndarray) -> np.ndarray:
    """Sum of f over parent and children, at every vertex of depth < N."""
    n_in = int(np.searchsorted(tree.level, tree.depth))  # interior prefix in BFS order
    kids = _child_totals(tree, f)[:n_in]
    up = np.zeros(n_in, dtype=f.dtype)
    up[1:] = f[tree.parent[1:n_in]]
    return kids + up


def apply_mu1(tree: TruncatedTree, f) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-neighbour average (mu1 f)(v) on a truncated tree.

    Parameters
    ----------
    tree : TruncatedTree
    f : array_like
        Values at every vertex.

    Returns
    -------
    values : ndarray
        Average of f over the neighbours of each vertex; NaN on the frontier.
    interior : ndarray of bool
        Where ``values`` is exact (depth < N).
    """
    f = np.asarray(f)
    if f.shape != (tree.size,):
        raise ValueError("f must have one value per vertex")
    dtype = np.result_type(f.dtype, np.float64)
    f = f.astype(dtype, copy=False)
    n_in = int(np.searchsorted(tree.level, tree.depth))
    deg = (tree.child_count[:n_in] + (tree.parent[:n_in] >= 0)).astype(np.float64)
    out = np.full(tree.size, np.nan, dtype=dtype)
    out[:n_in] = _neighbour_sums(tree, f) / deg
    return out, tree.interior


def apply_mu2(tree: TruncatedTree, f) -> tuple[np.ndarray, np.ndarray]:
    """Average of f over the distance-2 sphere of each vertex of depth < N-1.

    Computed by direct enumeration of the distance-2 sphere (grandparent,
    siblings, grandchildren), not through mu1.
    """
    f = np.asarray(f)
    if f.shape != (tree.size,):
        raise ValueError("f must have one value per vertex")
    dtype = np.result_type(f.dtype, np.float64)
    f = f.astype(dtype, copy=False)
    out = np.full(tree.size, np.nan, dtype=dtype)
    if tree.depth < 2:
        return out, np.zeros(tree.size, dtype=bool)
    n_in = int(np.searchsorted(tree.level, tree.depth - 1))
    kid_sum = _child_totals(tree, f)
    kid_num = tree.child_count.astype(np.float64)
    v = np.arange(n_in)
    # grandchildren: the children of v's children
    total = _child_totals(tree, kid_sum)[:n_in]
    count = _child_totals(tree, kid_num)[:n_in]

    par = tree.parent[v]
    has_par = par >= 0
    pv = par[has_par]
    # siblings: children of the parent except v itself
    total[has_par] += kid_sum[pv] - f[v[has_par]]
    count[has_par] += tree.child_count[pv] - 1
    gp = tree.parent[pv]
    has_gp = gp >= 0
    idx = np.flatnonzero(has_par)[has_gp]
    total[idx] += f[gp[has_gp]]
    count[idx] += 1
    out[:n_in] = total / count
    return out, tree.level < tree.depth - 1
