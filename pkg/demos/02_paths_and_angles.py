"""
Paths in Sp(2n) and their rotation number
=========================================

An element of the universal cover is a sampled path from the identity.  Its
rotation number follows arg det(X + iY) of the unitary polar factor and is
measured in turns.
"""
import numpy as np

from maslovqm.corpus import mixed_element, phase_loop
from maslovqm.cover import gen_phase_path, gen_shear_path, iota, path_inverse
from maslovqm.rotation import lifted_angle, loop_index, unwrapped_angle2x2
from maslovqm.symplectic import random_spd_symplectic

# a full turn of the phase is a loop of Maslov index 1
loop = gen_phase_path([2 * np.pi])
print("phase loop: angle", lifted_angle(loop).value, "index", loop_index(loop))

# loops of winding k spread over n phases
for n in (1, 2, 3):
    print(f"n={n}", [loop_index(phase_loop(n, k)) for k in range(-3, 4)])

# positive paths t -> P^t never rotate
P = random_spd_symplectic(2, 1.0, seed=3)
print("iota(P) angle", lifted_angle(iota(P)).value)

# the shear path ends at [[1, 1], [0, 1]] with angle atan2(-1, 2) / 2pi
shear = gen_shear_path(1)
print("shear angle", lifted_angle(shear).value, "oracle", unwrapped_angle2x2(shear))

# inverses negate the angle
g = mixed_element(2, seed=5)
print("g, g^-1:", lifted_angle(g).value, lifted_angle(path_inverse(g)).value)
