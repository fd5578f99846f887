"""Central numerical defaults.

Every tolerance used by the kernels and checks lives here so that a run can be
reproduced from one record.  Tolerances marked *relative* are multiplied by the
Frobenius norm of the input.
"""
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    sym: float = 1e-12          # relative symmetry check for eigen input
    jacobi: float = 1e-14       # relative off-diagonal target of Jacobi sweeps
    jacobi_sweeps: int = 100
    polar: float = 1e-14        # absolute step size of the Newton polar iteration
    polar_iters: int = 100
    det_guard: float = 1e-300   # |det A| below this is treated as singular
    pos: float = 1e-12          # smallest admissible eigenvalue for matrix powers
    orth: float = 1e-10
    recon: float = 1e-10        # relative
    sp: float = 1e-8            # symplectic residual, scaled by (1 + |Psi|_F^2)
    unitary: float = 1e-9
    identity_start: float = 1e-10
    loop_end: float = 1e-8
    loop_round: float = 1e-6
    max_step: float = 1.5707963267948966  # pi/2, per-step angle guard
    overflow: float = 1e300
    slack: float = 1e-6         # numerical slack added to every property tolerance
    det_restriction: float = 1e-8


DEFAULT = Tolerances()

# grid policy for generated paths
DEFAULT_STEPS = 256
MAX_STEPS = 2 ** 20
