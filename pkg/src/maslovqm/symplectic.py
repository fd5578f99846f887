"""The group Sp(2n) with the standard form J0 = [[0, -I], [I, 0]].

Unitary matrices X + iY are embedded as ``[[X, -Y], [Y, X]]``; this is exactly
Sp(2n) intersected with O(2n).  Random generators draw from a SplitMix64
stream, see :mod:`maslovqm.rng` for the bit-level contract.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import DEFAULT
from .errors import FactorNotSymplectic, NotUnitary, OddDimension
from .numerics import complex_det, frob, jacobi_eigh, polar_newton
from .rng import SplitMix64


def standard_j(n):
    if n < 1:
        raise ValueError("n must be positive")
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = -np.eye(n)
    j[n:, :n] = np.eye(n)
    return j


def half_dim(M):
    d = np.shape(M)[-1]
    if d % 2:
        raise OddDimension(f"dimension {d} is odd")
    return d // 2


def sp_tolerance(M, tol=None):
    tol = DEFAULT.sp if tol is None else tol
    return tol * (1.0 + frob(M) ** 2)


class SymplecticCheck(NamedTuple):
    ok: bool
    residual: float


def symplectic_residual(M):
    """``|M J0 M^T - J0|_F``, vectorized over stacks."""
    M = np.asarray(M, dtype=float)
    j = standard_j(half_dim(M))
    return frob(M @ j @ np.swapaxes(M, -1, -2) - j)


def is_symplectic(M, tol=None):
    """Compare the symplectic residual against ``tol * (1 + |M|_F^2)``."""
    res = float(symplectic_residual(M))
    return SymplecticCheck(res <= sp_tolerance(M, tol), res)


def is_spd_symplectic(P, tol=None):
    P = np.asarray(P, dtype=float)
    if not is_symplectic(P, tol).ok:
        return False
    if frob(P - P.T) > DEFAULT.recon * max(1.0, frob(P)):
        return False
    return bool(jacobi_eigh(P).eigenvalues[0] > 0.0)


@dataclass(frozen=True)
class UnitarySymplectic:
    """Element of U(n) stored as real and imaginary parts of ``X + iY``."""
    X: np.ndarray
    Y: np.ndarray

    @property
    def n(self):
        return self.X.shape[-1]

    @property
    def complex(self):
        return self.X + 1j * self.Y

    @property
    def matrix(self):
        top = np.concatenate([self.X, -self.Y], axis=-1)
        bottom = np.concatenate([self.Y, self.X], axis=-1)
        return np.concatenate([top, bottom], axis=-2)

    @classmethod
    def from_complex(cls, W):
        W = np.asarray(W, dtype=complex)
        return cls(W.real.copy(), W.imag.copy())

    @classmethod
    def from_matrix(cls, U):
        """Read ``X, Y`` off the complex-linear part of a real 2n x 2n matrix."""
        n = half_dim(U)
        U = np.asarray(U, dtype=float)
        X = 0.5 * (U[..., :n, :n] + U[..., n:, n:])
        Y = 0.5 * (U[..., n:, :n] - U[..., :n, n:])
        return cls(X, Y)

    def unitarity_residual(self):
        W = self.complex
        return frob(np.conj(np.swapaxes(W, -1, -2)) @ W - np.eye(self.n))


def det_u(u, tol=None):
    """``det(X + iY)`` of a unitary embedding; a unit complex number."""
    tol = DEFAULT.unitary if tol is None else tol
    if np.any(u.unitarity_residual() > tol):
        raise NotUnitary(f"unitarity residual {np.max(u.unitarity_residual()):.3e}")
    return complex_det(u.complex)


def symplectic_polar(psi, tol=None):
    """Polar factors of a symplectic matrix, both checked to lie in the group.

    Returns ``(u, p)`` with ``psi = u.matrix @ p``, ``u`` unitary and ``p``
    symmetric positive definite symplectic.
    """
    psi = np.asarray(psi, dtype=float)
    orth, pos = polar_newton(psi)
    loose = 10.0 * (DEFAULT.sp if tol is None else tol)
    if not is_symplectic(orth, loose).ok or frob(orth.T @ orth - np.eye(len(orth))) > loose:
        raise FactorNotSymplectic("orthogonal factor left Sp(2n) n O(2n)")
    if not is_spd_symplectic(pos, loose):
        raise FactorNotSymplectic("positive factor left the SPD symplectic set")
    return UnitarySymplectic.from_matrix(orth), pos


def hamiltonian_generator(U, V):
    """``[[U, V], [V, -U]]``: symmetric and anticommuting with J0."""
    return np.block([[U, V], [V, -U]])


def spd_exp(A):
    eig = jacobi_eigh(A)
    out = (eig.rotation * np.exp(eig.eigenvalues)[..., None, :]) @ np.swapaxes(eig.rotation, -1, -2)
    return 0.5 * (out + np.swapaxes(out, -1, -2))


def _random_symmetric(rng, n, scale):
    m = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            m[i, j] = m[j, i] = rng.uniform(-scale, scale)
    return m


def _draw_spd(rng, n, scale):
    U = _random_symmetric(rng, n, scale)
    V = _random_symmetric(rng, n, scale)
    return spd_exp(hamiltonian_generator(U, V))


def random_spd_symplectic(n, scale=1.0, seed=0):
    """Symmetric positive definite symplectic matrix ``exp([[U, V], [V, -U]])``.

    ``U`` then ``V`` are filled row by row over the upper triangle with draws
    uniform in ``[-scale, scale]``.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    return _draw_spd(SplitMix64(seed), n, scale)


@dataclass(frozen=True)
class UnitaryParams:
    """Givens angles ``(p, q, angle, phase)`` and diagonal phases of a unitary."""
    n: int
    givens: tuple
    phases: tuple

    def at(self, t=1.0):
        """``prod_k G_k(t * angle_k) @ diag(exp(i t phase))``; a path from I at t=0.

        An array of times gives a stack of unitaries.
        """
        t = np.asarray(t, dtype=float)
        W = np.broadcast_to(np.eye(self.n, dtype=complex), t.shape + (self.n, self.n)).copy()
        for p, q, angle, phase in self.givens:
            g = np.broadcast_to(np.eye(self.n, dtype=complex), W.shape).copy()
            c, s = np.cos(t * angle), np.sin(t * angle)
            g[..., p, p] = g[..., q, q] = c
            g[..., p, q] = -np.exp(-1j * phase) * s
            g[..., q, p] = np.exp(1j * phase) * s
            W = W @ g
        return W * np.exp(1j * t[..., None] * np.asarray(self.phases))[..., None, :]

    @property
    def total_phase(self):
        return float(sum(self.phases))


def _draw_unitary_params(rng, n):
    givens = []
    for p in range(n):
        for q in range(p + 1, n):
            givens.append((p, q, rng.uniform(0.0, 2 * np.pi), rng.uniform(0.0, 2 * np.pi)))
    phases = tuple(rng.uniform(-np.pi, np.pi) for _ in range(n))
    return UnitaryParams(n, tuple(givens), phases)


def random_unitary_params(n, seed=0):
    """For each pair ``p < q`` in row order draw a rotation angle and a phase,
    both uniform in [0, 2pi); then ``n`` diagonal phases uniform in [-pi, pi).
    Not Haar distributed."""
    return _draw_unitary_params(SplitMix64(seed), n)


def random_unitary_symplectic(n, seed=0):
    return UnitarySymplectic.from_complex(random_unitary_params(n, seed).at(1.0))


def random_symplectic(n, scale=1.0, seed=0):
    """``Q @ P`` with the unitary drawn first and the SPD factor second from one stream."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    rng = SplitMix64(seed)
    Q = UnitarySymplectic.from_complex(_draw_unitary_params(rng, n).at(1.0))
    P = _draw_spd(rng, n, scale)
    return Q.matrix @ P
