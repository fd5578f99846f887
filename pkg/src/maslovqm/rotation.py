"""Lifted rotation number of a path and the Maslov index of loops.

The rotation number is the continuous lift of ``arg det(X + iY)`` of the
unitary polar factor along the path, measured in full turns.  It is a
quasimorphism on the universal cover whose defect is given by an explicit
bounded cocycle, see :func:`rotation_cocycle`.
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import NotALoop, NotNearInteger, StepTooLarge
from .numerics import frob
from .symplectic import half_dim


@dataclass(frozen=True)
class LiftedAngle:
    value: float      # turns
    step_count: int
    max_step: float   # radians


def lifted_angle(g):
    """Sum of principal per-step increments of the unit determinant, over 2pi.

    Raises :class:`StepTooLarge` if any increment reaches pi/2.
    """
    steps = g.angle_steps
    worst = float(np.max(np.abs(steps))) if len(steps) else 0.0
    if worst >= DEFAULT.max_step:
        raise StepTooLarge(f"angle step {worst:.3f} rad >= pi/2; refine the path")
    return LiftedAngle(float(np.sum(steps) / (2 * np.pi)), len(steps), worst)


def loop_index(g):
    """Integer winding of a loop based at the identity."""
    gap = frob(g.endpoint - np.eye(2 * g.n))
    if gap > DEFAULT.loop_end:
        raise NotALoop(f"endpoint is {gap:.3e} away from the identity")
    value = lifted_angle(g).value
    k = round(value)
    if abs(value - k) > DEFAULT.loop_round:
        raise NotNearInteger(f"lifted angle {value!r} is not within 1e-6 of an integer")
    return int(k)


def angle2x2(A):
    """Rotation angle of the orthogonal polar factor of a 2x2 matrix with det > 0."""
    A = np.asarray(A, dtype=float)
    return np.arctan2(A[..., 1, 0] - A[..., 0, 1], A[..., 0, 0] + A[..., 1, 1])


def unwrapped_angle2x2(g):
    """Independent n = 1 route: unwrap the closed-form polar angle of every sample."""
    if g.n != 1:
        raise ValueError("angle2x2 oracle only applies to n = 1")
    phi = np.unwrap(angle2x2(g.samples))
    return float((phi[-1] - phi[0]) / (2 * np.pi))


def complex_parts(S):
    """Split a real 2n x 2n matrix as ``v -> Z v + W conj(v)`` on C^n.

    ``Z`` is the complex-linear part ((A + D) + i(C - B)) / 2 and ``W`` the
    antilinear part ((A - D) + i(B + C)) / 2 of ``S = [[A, B], [C, D]]``.  For
    symplectic ``S`` the phase of ``det Z`` equals the phase of ``det(X + iY)``
    of the unitary polar factor.
    """
    S = np.asarray(S, dtype=float)
    n = half_dim(S)
    a, b = S[..., :n, :n], S[..., :n, n:]
    c, d = S[..., n:, :n], S[..., n:, n:]
    return 0.5 * ((a + d) + 1j * (c - b)), 0.5 * ((a - d) + 1j * (b + c))


def siegel_left(S):
    """``Z^-1 W``; a symmetric contraction for symplectic ``S``."""
    Z, W = complex_parts(S)
    return np.linalg.solve(Z, W)


def siegel_right(S):
    """``conj(W) Z^-1``; a contraction for symplectic ``S``."""
    Z, W = complex_parts(S)
    return np.swapaxes(np.linalg.solve(np.swapaxes(Z, -1, -2), np.swapaxes(np.conj(W), -1, -2)), -1, -2)


def cocycle_from_siegel(left, right):
    """``sum_j Arg(1 + lambda_j) / 2pi`` over the eigenvalues of ``left @ right``.

    Every eigenvalue lies in the open unit disk, so each principal argument is
    in (-pi/2, pi/2) and the sum is the continuous branch vanishing at 0.
    """
    lam = np.linalg.eigvals(left @ right)
    return float(np.sum(np.angle(1.0 + lam)) / (2 * np.pi))


def rotation_cocycle(S1, S2):
    """Defect of the rotation number for endpoints ``S1, S2``, in turns.

    ``rho(gh) - rho(g) - rho(h)`` equals this value whenever ``g, h`` end at
    ``S1, S2``; its magnitude is below n/4.
    """
    return cocycle_from_siegel(siegel_left(S1), siegel_right(S2))
