"""
The lp spectra of the averaging operator
========================================

For p != 2 the spectrum is bounded by the square roots of an ellipse whose
foci a^2, b^2 do not move with p.  This demo prints the spectral radius
along p, shows where the spectrum splits into two pieces, and writes the
boundary curve for p = 3 to a CSV file that any plotting tool can read.
"""

import csv
import math

from semitree import (
    TreeParams,
    boundary_curve,
    endpoints,
    is_connected,
    membership,
    sigma_p,
    spectral_radius,
    split_exponent,
)

tree = TreeParams(5, 2)
e = endpoints(tree)
print(f"l2 spectrum: [-{e.b:.6f}, -{e.a:.6f}] u [{e.a:.6f}, {e.b:.6f}] plus the point 0")

for p in (1, 1.25, 1.5, 2, 3, 5, math.inf):
    s = sigma_p(tree, p)
    print(f"p={p:>5}: rho={spectral_radius(tree, p):.6f}  "
          f"semi-axes ({s.semi_axis_real:.4f}, {s.semi_axis_imag:.4f})  "
          f"connected={is_connected(tree, p)}")

split = split_exponent(tree)
print(f"\nsplit exponent ln10/ln5 = {split:.6f}")
for p in (split - 0.05, split + 0.05):
    print(f"  p={p:.4f}: 0.02i is {membership(tree, p, 0.02j).verdict}")

curve = boundary_curve(tree, 3, samples=180)
with open("boundary_p3.csv", "w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["re", "im"])
    for g in curve.points():
        w.writerow([g.real, g.imag])
print("\nwrote boundary_p3.csv with", len(curve.points()), "points")
