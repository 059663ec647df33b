"""
Poisson kernels and their powers
================================

On a homogeneous tree the powers K^z of the Poisson kernel are
eigenfunctions.  On a semi-homogeneous tree they are not, and the
generalized kernel built from the hitting probabilities takes their
place.  The check uses the depth-one vertex on the ray to the boundary
point.
"""

import numpy as np

from semitree import (
    TreeParams,
    gamma_squared_of_z,
    generalized_kernel_eigen_test,
    generalized_poisson,
    kernel_power_eigen_test,
    poisson_kernel,
)

tree = TreeParams(3, 5)
z = 0.3 + 0.1j
gamma = np.sqrt(gamma_squared_of_z(tree, z))

power = kernel_power_eigen_test(tree, z)
print(f"K^z with z={z}: relative failure of the eigen-equation {power['residual']:.2e}")
gen = generalized_kernel_eigen_test(tree, gamma)
print(f"generalized kernel at gamma={gamma:.4f}: residuals "
      f"{gen['residual_v0']:.1e} (root), {gen['residual_v1']:.1e} (depth one)")

# At gamma = 1 the generalized kernel is the harmonic one.
print("\n n  k  harmonic  generalized(1)")
for n in range(4):
    parity = 1 if n % 2 == 0 else -1
    for k in range(n + 1):
        h = 2 * k - n
        print(f"{n:2d} {k:2d}  {poisson_kernel(tree, n, k):8.4f}  "
              f"{generalized_poisson(tree, parity, h, 1.0).real:8.4f}")
