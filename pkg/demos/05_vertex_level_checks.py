"""
Checking on an explicit tree
============================

Closed forms are only as good as the oracles behind them.  This demo builds
the ball of radius 12, places the radial profile on every vertex and
measures how far the nearest-neighbour average is from gamma times the
function.  It then compares the analytic lp class of the spherical
function with the growth of its partial sums.
"""

import numpy as np

from semitree import TreeParams, eigen_residual, endpoints, lp_partial_sums, lp_range_of_spherical
from semitree.tree_core import cached_tree

tree = TreeParams(2, 5)
ball = cached_tree(tree, 12)
print(f"ball of radius 12: {ball.size:,} vertices, spheres {ball.census()[:6]} ...")

e = endpoints(tree)
gammas = np.array([0, e.a, e.b, 0.5, 0.3 + 0.4j, 1.7], dtype=complex)
for g, r in zip(gammas, eigen_residual(tree, gammas, 12)):
    print(f"gamma={g:.4f}: worst vertex residual {r:.1e}")

print("\n gamma          threshold  p=1.2  p=2    p=5")
for g in (0, 0.3 + 0.05j, 0.05 + 0.2j, 1.0):
    r = lp_range_of_spherical(tree, g)
    cells = []
    for p in (1.2, 2, 5):
        d = lp_partial_sums(tree, g, p)
        cells.append(f"{'yes' if r.contains(p) else 'no':>3}/{d.verdict[:3]}")
    print(f"{complex(g):<14.3f} {r.lower:9.3f}  " + "  ".join(cells))
