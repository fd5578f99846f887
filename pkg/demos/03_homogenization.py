"""
Homogenization
==============

mu(g) is the limit of a_m = rho(g^(2^m)) / 2^m.  Consecutive differences
halve, so the error after m doublings is of order n / 2^m.
"""
import numpy as np

from maslovqm.corpus import mixed_element
from maslovqm.cover import gen_phase_path, gen_shear_path, path_power
from maslovqm.qm import homogenization_sequence, mu, terminal_ratio

g = mixed_element(2, seed=0)
seq = homogenization_sequence(g, 12)
for m, a in enumerate(seq):
    print(f"m={m:2d}  a_m={a:+.12f}")
print("terminal ratio", terminal_ratio(seq))

v = mu(g)
print("mu", v.value, "err_bound", v.err_bound, "converged", v.converged)

# on unitary elements mu is just the rotation number
print("mu(phase pi/3)", mu(gen_phase_path([np.pi / 3])).value)

# the shear has bounded powers in angle, so mu vanishes
print("mu(shear)", mu(gen_shear_path(1)).value)

# homogeneity: mu(g^3) = 3 mu(g) within the truncation error
g3 = path_power(g, 3)
print("mu(g^3) - 3 mu(g) =", mu(g3).value - 3 * v.value)
