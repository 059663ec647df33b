"""
Hitting probabilities
=====================

F+ is the probability that a walk started at a vertex of V+ ever visits a
given neighbour.  Its closed form is compared with the exact first-passage
series and with a seeded Monte Carlo run of the distance chain.
"""

from semitree import F_series, TreeParams, hitting_F, monte_carlo_hitting

tree = TreeParams(5, 2)

for sign, label in ((+1, "F+"), (-1, "F-")):
    exact = hitting_F(tree, 1.0, sign).real
    series = F_series(tree, sign, 1.0, N=200)
    mc = monte_carlo_hitting(tree, sign, walks=100_000, seed=7)
    print(f"{label}(1): closed {exact:.6f}  series {series.partial_sum.real:.6f}"
          f"  Monte Carlo {mc.estimate:.4f} +- {mc.stderr:.4f}"
          f"  (unabsorbed at cap {mc.unabsorbed:.3f})")

# Off the spectrum the same series is a generating function in 1/gamma.
for gamma in (2.0, 1.2 + 0.9j):
    s = F_series(tree, +1, gamma)
    gap = abs(s.partial_sum - hitting_F(tree, gamma, +1))
    print(f"gamma={gamma}: |series - closed| = {gap:.1e}, tail bound {s.tail_bound:.1e}")

# Near gamma = 0 one of F+, F- has a simple pole and the other vanishes.
for g in (1e-2j, 1e-4j):
    print(f"gamma={g}: F+ = {hitting_F(tree, g, +1):.3e}, F- = {hitting_F(tree, g, -1):.3e}")
