"""
Nevanlinna-Pick interpolation on the unit disk
==============================================

Given nodes z_i and targets w_i in the open disk, a holomorphic self-map
of the disk through all the pairs exists exactly when the Pick matrix

    [ (1 - w_i conj(w_j)) / (1 - z_i conj(z_j)) ]

is positive semidefinite.  The solver runs the Schur-Nevanlinna
reduction and returns the interpolant as a chain of disk automorphisms.
"""

import numpy as np

from aglerkit.errors import NotSolvableError
from aglerkit.pick import PickProblem, is_solvable, pick_matrix, solve

# A solvable problem: three nodes, targets sampled from a Blaschke
# product so a degree-2 interpolant exists.
nodes = np.array([0.0, 0.4 + 0.2j, -0.3 + 0.35j])


def blaschke(z, a):
    return (z - a) / (1 - np.conj(a) * z)


targets = blaschke(nodes, 0.3) * blaschke(nodes, -0.2j)

M = pick_matrix(nodes, targets)
print("Pick matrix eigenvalues:", np.round(np.linalg.eigvalsh(M), 6))

problem = PickProblem(nodes, targets)
verdict, min_eig = is_solvable(problem)
print("verdict:", verdict, " (min eigenvalue %.3e)" % min_eig)

f = solve(problem)
print("interpolant degree:", f.degree)
for z, w in zip(nodes, targets):
    print("  f(%s) = %s  target %s  |gap| = %.2e"
          % (np.round(z, 3), np.round(f(z), 6), np.round(w, 6), abs(f(z) - w)))

# The interpolant is a genuine self-map of the disk: check on a circle.
theta = np.linspace(0, 2 * np.pi, 100)
ring = 0.95 * np.exp(1j * theta)
print("max |f| on |z| = 0.95:", np.max(np.abs(f(ring))))

# An unsolvable problem: the Schwarz lemma forces |f(1/2)| <= 1/2 when
# f(0) = 0, so the target 0.9 is out of reach.
bad = PickProblem([0.0, 0.5], [0.0, 0.9])
verdict, min_eig = is_solvable(bad)
print("\nnodes (0, 1/2) -> targets (0, 0.9):", verdict,
      " (min eigenvalue %.3f)" % min_eig)
try:
    solve(bad)
except NotSolvableError as exc:
    print("solve() raised NotSolvableError:", exc)

# A singular Pick matrix pins the interpolant down uniquely: two nodes
# joined by a disk automorphism.
unique = PickProblem([0.0, 0.5], [0.0, 0.5])
verdict, min_eig = is_solvable(unique)
print("\nidentity data on two nodes:", verdict)
g = solve(unique)
probe = 0.37 - 0.11j
print("unique interpolant reproduces z: g(%s) = %s" % (probe, g(probe)))
