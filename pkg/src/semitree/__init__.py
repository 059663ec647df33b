"""
semitree: spectral theory of the adjacency operator on semi-homogeneous trees.

A semi-homogeneous tree has two vertex classes V+ and V- of degrees
q+ + 1 and q- + 1, and every edge joins the two classes.  The package
computes spherical functions, hitting probabilities, Poisson kernels and
the lp spectra of the averaging operator mu1, with independent oracles
(exact series, Monte Carlo, an explicit vertex-level tree) to check them.
"""

__version__ = "0.1.0"

from .branch_kernels import (
    BranchCutError,
    PoleError,
    B_of_gamma,
    alt_generalized_poisson,
    branch_data,
    endpoints,
    generalized_kernel_eigen_test,
    generalized_poisson,
    hitting_F,
    hitting_Ft,
    in_cut,
    kernel_power_eigen_test,
    poisson_kernel,
    quartic_W,
    root_R,
)
from .oracle import (
    F_series,
    eigen_residual,
    first_passage_coefficients,
    green_series,
    lp_partial_sums,
    monte_carlo_hitting,
)
from .spectra import (
    abs_B,
    boundary_curve,
    is_connected,
    lp_range_of_spherical,
    membership,
    mu2_region,
    non_ellipticity_residual,
    p_crit,
    sigma_p,
    spectral_radius,
    split_exponent,
)
from .spherical import (
    arc_sum_eval,
    closed_form,
    coefficients,
    gamma_squared_of_z,
    homogeneous_spherical,
    recurrence_eval,
    z_of_gamma,
)
from .tree_core import (
    MINUS,
    PLUS,
    CapacityError,
    TreeParams,
    apply_mu1,
    apply_mu2,
    arc_partition,
    build_truncated_tree,
    sphere_cardinality,
)
