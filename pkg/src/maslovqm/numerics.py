"""Dense kernels: cyclic Jacobi eigensolver, scaled Newton polar iteration,
powers of SPD matrices and a pivoted complex determinant.

All kernels accept a single matrix ``(d, d)`` or a stack ``(..., d, d)`` and
loop over the batch inside numpy, so a whole sampled path is processed with
one call.
"""
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import NoConvergence, NotPositive, NotSymmetric, Singular


@dataclass(frozen=True)
class SymEigen:
    rotation: np.ndarray     # orthogonal, eigenvectors in columns
    eigenvalues: np.ndarray  # ascending

    def reconstruct(self):
        q = self.rotation
        return (q * self.eigenvalues[..., None, :]) @ np.swapaxes(q, -1, -2)


def frob(a):
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def _as_stack(a, dtype=float):
    a = np.asarray(a, dtype=dtype)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrix or stack, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a.reshape((-1,) + a.shape[-2:]), a.shape[:-2]


def jacobi_eigh(S, tol=None, max_sweeps=None):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.

    Sweeps over all pivot pairs ``(p, q)`` in row order until the off-diagonal
    Frobenius norm drops below ``tol * |S|_F``.  Returns eigenvalues in
    ascending order with the matching orthonormal eigenvectors as columns.
    """
    tol = DEFAULT.jacobi if tol is None else tol
    max_sweeps = DEFAULT.jacobi_sweeps if max_sweeps is None else max_sweeps
    a, batch = _as_stack(S)
    d = a.shape[-1]
    norm = frob(a)
    asym = frob(a - np.swapaxes(a, -1, -2))
    if np.any(asym > DEFAULT.sym * np.maximum(norm, np.finfo(float).tiny)):
        raise NotSymmetric(f"asymmetry {asym.max():.3e} exceeds tolerance")
    a = 0.5 * (a + np.swapaxes(a, -1, -2))
    v = np.broadcast_to(np.eye(d), a.shape).copy()
    target = tol * norm
    offmask = ~np.eye(d, dtype=bool)

    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(a[:, offmask] ** 2, axis=-1))
        if np.all(off <= target):
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[:, p, q]
                active = apq != 0.0
                if not np.any(active):
                    continue
                safe = np.where(active, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c_, s_ = c[:, None], s[:, None]
                ap, aq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c_ * ap - s_ * aq
                a[:, :, q] = s_ * ap + c_ * aq
                ap, aq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c_ * ap - s_ * aq
                a[:, q, :] = s_ * ap + c_ * aq
                vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                v[:, :, p] = c_ * vp - s_ * vq
                v[:, :, q] = s_ * vp + c_ * vq
    else:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diagonal(a, axis1=-2, axis2=-1).copy()
    order = np.argsort(w, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    v = np.take_along_axis(v, order[:, None, :], axis=-1)
    return SymEigen(v.reshape(batch + (d, d)), w.reshape(batch + (d,)))


def polar_newton(A, tol=None, max_iter=None):
    """Polar factorization ``A = orth @ pos`` by the scaled Newton iteration.

    Iterates ``X <- (c X + X^-T / c) / 2`` with the determinant scaling
    ``c = |det X|^(-1/d)`` clamped to [0.1, 10].  Stops once every matrix in
    the stack moves by at most ``tol`` in Frobenius norm.
    """
    tol = DEFAULT.polar if tol is None else tol
    max_iter = DEFAULT.polar_iters if max_iter is None else max_iter
    a, batch = _as_stack(A)
    d = a.shape[-1]
    _, logdet = np.linalg.slogdet(a)
    if np.any(logdet <= np.log(DEFAULT.det_guard)):
        raise Singular("matrix is numerically singular")

    x = a.copy()
    for _ in range(max_iter):
        _, logdet = np.linalg.slogdet(x)
        c = np.clip(np.exp(-logdet / d), 0.1, 10.0)[:, None, None]
        nxt = 0.5 * (c * x + np.swapaxes(np.linalg.inv(x), -1, -2) / c)
        step = frob(nxt - x)
        x = nxt
        if np.all(step <= tol):
            break
    else:
        raise NoConvergence(f"polar Newton did not converge in {max_iter} iterations")

    pos = np.swapaxes(x, -1, -2) @ a
    pos = 0.5 * (pos + np.swapaxes(pos, -1, -2))
    return x.reshape(batch + (d, d)), pos.reshape(batch + (d, d))


def spd_power(P, t):
    """``P**t`` for symmetric positive definite ``P`` via its eigendecomposition.

    ``t`` may be a scalar or a 1-d array of exponents; an array yields a stack
    with one power per exponent.
    """
    P = np.asarray(P, dtype=float)
    eig = jacobi_eigh(P)
    lam = eig.eigenvalues
    if np.any(lam <= DEFAULT.pos * max(1.0, float(np.max(np.abs(lam))))):
        raise NotPositive(f"smallest eigenvalue {lam.min():.3e} is not positive")
    q = eig.rotation
    t = np.asarray(t, dtype=float)
    powers = lam ** t[..., None]
    out = (q * powers[..., None, :]) @ q.T
    return 0.5 * (out + np.swapaxes(out, -1, -2))


def complex_det(M):
    """Determinant by Gaussian elimination with partial pivoting on modulus.

    Singular input gives 0.  Real input is promoted to complex.
    """
    a, batch = _as_stack(M, dtype=complex)
    a = a.copy()
    nb, d, _ = a.shape
    det = np.ones(nb, dtype=complex)
    rows = np.arange(nb)
    for k in range(d):
        piv = k + np.argmax(np.abs(a[:, k:, k]), axis=-1)
        swap = piv != k
        if np.any(swap):
            r = rows[swap]
            tmp = a[r, k, :].copy()
            a[r, k, :] = a[r, piv[swap], :]
            a[r, piv[swap], :] = tmp
            det[swap] = -det[swap]
        pivot = a[:, k, k]
        det *= pivot
        if k + 1 < d:
            nz = pivot != 0
            factors = np.zeros((nb, d - k - 1), dtype=complex)
            factors[nz] = a[nz, k + 1:, k] / pivot[nz, None]
            a[:, k + 1:, k:] -= factors[:, :, None] * a[:, None, k, k:]
    return det.reshape(batch) if batch else det[0]
