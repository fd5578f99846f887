"""Homogenized Maslov quasimorphism on the universal cover of Sp(2n)."""
from .cover import (CoverElement, gen_hamiltonian_path, gen_phase_path, gen_shear_path,
                    gen_unitary_path, iota, path_inverse, path_power, path_product)
from .qm import MuValue, defect_scan, homogenization_sequence, mu, run_suite
from .rotation import angle2x2, lifted_angle, loop_index, rotation_cocycle
from .symplectic import (det_u, is_symplectic, random_spd_symplectic, random_symplectic,
                         random_unitary_symplectic, standard_j, symplectic_polar)

__version__ = "0.1.0"
