"""
Dense kernels
=============

The library carries its own small eigensolver, polar iteration and complex
determinant.  This walk-through checks each against numpy on a few inputs.
"""
import numpy as np

from maslovqm.numerics import complex_det, jacobi_eigh, polar_newton, spd_power

rng = np.random.default_rng(0)

# symmetric eigenproblem by cyclic Jacobi sweeps
a = rng.standard_normal((5, 5))
S = a + a.T
eig = jacobi_eigh(S)
print("eigenvalues      ", np.round(eig.eigenvalues, 6))
print("numpy eigvalsh   ", np.round(np.linalg.eigvalsh(S), 6))
print("reconstruction   ", np.linalg.norm(eig.reconstruct() - S))

# polar factor of the shear [[1, 1], [0, 1]] is a rotation by atan2(-1, 2)
orth, pos = polar_newton(np.array([[1.0, 1.0], [0.0, 1.0]]))
print("shear polar angle", np.arctan2(orth[1, 0], orth[0, 0]), "expected", np.arctan2(-1, 2))

# fractional powers of an SPD matrix obey the group law
P = np.diag([4.0, 0.25])
print("P^(1/2)          ", np.diag(spd_power(P, 0.5)))

# pivoted complex determinant
M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
print("complex det      ", complex_det(M), "numpy", np.linalg.det(M))
