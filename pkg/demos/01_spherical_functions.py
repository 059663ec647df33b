"""
Spherical functions three ways
==============================

The radial eigenfunction of the nearest-neighbour average with value 1 at
the root can be computed from its two-term closed form, by running the
radial recursion, or by integrating the generalized Poisson kernel over
the boundary arcs.  Here all three are compared.
"""

import numpy as np

from semitree import TreeParams, arc_sum_eval, closed_form, endpoints, recurrence_eval

tree = TreeParams(3, 5)
gamma = 0.7 + 0.4j
n = np.arange(13)

closed = closed_form(tree, gamma, n)
recur = recurrence_eval(tree, gamma, 12).values
arcs = np.array([arc_sum_eval(tree, gamma, k) for k in n])

print(f"gamma = {gamma}")
print(" n   closed form              recursion                arc sum")
for k in n:
    print(f"{k:2d}   {closed[k]:.12f}   {recur[k]:.12f}   {arcs[k]:.12f}")

# At gamma = 0 the function vanishes on odd spheres and decays by 1/q-
# every two steps when the root lies in V+.
print("\ngamma = 0:", np.round(closed_form(tree, 0, n).real, 6))

# At the spectrum endpoints B = +-1 and the closed form switches to its
# degenerate (linear times geometric) version.
e = endpoints(tree)
for label, g in (("a", e.a), ("b", e.b)):
    gap = np.max(np.abs(closed_form(tree, g, n) - recurrence_eval(tree, g, 12).values))
    print(f"endpoint {label} = {g:.6f}: max gap to recursion {gap:.1e}")
