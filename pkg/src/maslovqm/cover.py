"""Elements of the universal cover of Sp(2n) as sampled paths from the identity.

A :class:`CoverElement` stores a uniform grid ``t_i = i / m`` (``m`` steps,
``m + 1`` samples) and the matrices ``Psi(t_i)``.  The homotopy class is never
computed symbolically: two representatives are treated as equal when their
endpoints and lifted angles agree.  Consecutive samples must be close enough
that the determinant of the unitary polar factor turns by less than pi/2 per
step; otherwise :class:`RefinementNeeded` is raised.

Generated paths keep a *closure* ``m -> CoverElement`` that regenerates them on
a finer grid.  Paths ingested from raw samples have none and cannot be refined.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .config import DEFAULT, DEFAULT_STEPS, MAX_STEPS
from .errors import (DimensionMismatch, GridMismatch, InvalidPath, NotRefinable,
                     Overflow, RefinementNeeded, StepTooLarge)
from .numerics import frob, jacobi_eigh, polar_newton, spd_power
from .rng import SplitMix64
from .symplectic import (UnitaryParams, UnitarySymplectic, _random_symmetric,
                         half_dim, random_unitary_params, sp_tolerance, spd_exp,
                         standard_j, symplectic_residual)
from .numerics import complex_det


def unit_dets(samples):
    """det(X + iY) of the orthogonal polar factor of each sample."""
    orth, _ = polar_newton(samples)
    return complex_det(UnitarySymplectic.from_matrix(orth).complex)


def uniform_grid(m):
    return np.linspace(0.0, 1.0, m + 1)


@dataclass(frozen=True, eq=False)
class CoverElement:
    times: np.ndarray
    samples: np.ndarray
    generator: Optional[str] = None
    params: Optional[dict] = None
    expected_angle: Optional[float] = None
    closure: Optional[Callable[[int], "CoverElement"]] = field(default=None, repr=False)
    unitary: bool = False      # every sample lies in U(n) by construction
    scale_only: bool = False   # samples are positive multiples of symplectic matrices

    @property
    def n(self):
        return self.samples.shape[-1] // 2

    @property
    def steps(self):
        return len(self.times) - 1

    @property
    def endpoint(self):
        return self.samples[-1]

    @cached_property
    def unit_dets(self):
        return unit_dets(self.samples)

    @property
    def angle_steps(self):
        d = self.unit_dets
        return np.angle(d[1:] * np.conj(d[:-1]))

    def check_coherence(self):
        steps = np.abs(self.angle_steps)
        worst = float(steps.max()) if len(steps) else 0.0
        if worst >= DEFAULT.max_step:
            raise StepTooLarge(f"angle step {worst:.3f} rad >= pi/2 on a grid of {self.steps} steps")
        return self

    def refined(self, m):
        if m == self.steps:
            return self
        if self.closure is None:
            raise NotRefinable("path was ingested from raw samples and has no generator")
        return self.closure(m)


def refine_until(build, m=None, m_cap=MAX_STEPS):
    """Call ``build(m)`` doubling ``m`` on :class:`RefinementNeeded` up to ``m_cap``."""
    m = DEFAULT_STEPS if m is None else m
    while True:
        try:
            return build(m)
        except RefinementNeeded:
            if 2 * m > m_cap:
                raise
            m *= 2


def _generated(build, m):
    """Build at ``m`` steps, or auto-refine from the default grid when ``m`` is None."""
    if m is None:
        return refine_until(build)
    if m < 2:
        raise ValueError("a path needs at least 2 steps")
    return build(m)


def validate(g, tol=None):
    """Check the path invariants; raise :class:`InvalidPath` or :class:`RefinementNeeded`."""
    s = g.samples
    if s.ndim != 3 or s.shape[1] != s.shape[2] or s.shape[1] % 2:
        raise InvalidPath(f"samples must be a stack of 2n x 2n matrices, got {s.shape}")
    t = g.times
    if len(t) != len(s) or len(t) < 2:
        raise InvalidPath("times and samples differ in length")
    if abs(t[0]) > 1e-12 or abs(t[-1] - 1.0) > 1e-12 or np.any(np.diff(t) <= 0):
        raise InvalidPath("times must ascend from 0 to 1")
    if not np.all(np.isfinite(s)):
        raise InvalidPath("non-finite sample entries")
    if frob(s[0] - np.eye(s.shape[1])) > DEFAULT.identity_start:
        raise InvalidPath("path does not start at the identity")
    _, logdet = np.linalg.slogdet(s)
    if np.any(logdet < np.log(1e-100)):
        raise InvalidPath("near-singular sample")
    if not g.scale_only:
        res = symplectic_residual(s)
        bad = res > sp_tolerance(s, tol)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise InvalidPath(f"sample {i} is not symplectic (residual {res[i]:.3e})")
    g.check_coherence()
    return g


# -- group operations ---------------------------------------------------------

def _common_grid(g, h):
    if g.n != h.n:
        raise DimensionMismatch(f"half-dimensions differ: {g.n} vs {h.n}")
    if g.steps == h.steps and np.array_equal(g.times, h.times):
        return g, h
    if g.closure is None or h.closure is None:
        raise GridMismatch("paths live on different grids; supply both on a common grid")
    m = max(g.steps, h.steps)
    return g.refined(m), h.refined(m)


def path_product(g, h):
    """Pointwise product ``t -> Psi(t) Phi(t)``, representing ``[Psi][Phi]``."""
    g, h = _common_grid(g, h)
    closure = None
    if g.closure is not None and h.closure is not None:
        closure = lambda m: path_product(g.refined(m), h.refined(m))
    both_unitary = g.unitary and h.unitary
    expected = None
    if both_unitary and g.expected_angle is not None and h.expected_angle is not None:
        expected = g.expected_angle + h.expected_angle
    out = CoverElement(g.times, g.samples @ h.samples, "product", None, expected, closure,
                       unitary=both_unitary, scale_only=g.scale_only or h.scale_only)
    return out.check_coherence()


def path_inverse(g):
    """Pointwise inverse through ``Psi^-1 = J0^-1 Psi^T J0``."""
    if g.scale_only:
        inv = np.linalg.inv(g.samples)
    else:
        j = standard_j(g.n)
        inv = -j @ np.swapaxes(g.samples, -1, -2) @ j
    closure = None if g.closure is None else (lambda m: path_inverse(g.refined(m)))
    expected = None if g.expected_angle is None else -g.expected_angle
    return CoverElement(g.times, inv, "inverse", None, expected, closure,
                        unitary=g.unitary, scale_only=g.scale_only)


def _matmul(a, b, renormalize):
    with np.errstate(over="ignore", invalid="ignore"):
        out = a @ b
    if renormalize:
        out = out / frob(out)[:, None, None]
    elif not np.all(np.isfinite(out)) or np.max(np.abs(out)) > DEFAULT.overflow:
        raise Overflow("power path entries exceed 1e300; use renormalize=True")
    return out


def path_power(g, k, renormalize=False):
    """Pointwise power ``t -> Psi(t)**k`` by repeated squaring.

    With ``renormalize`` every product is divided by its Frobenius norm.  The
    orthogonal polar factor, and so every angle, is unchanged, but the samples
    are no longer symplectic and the result is flagged ``scale_only``.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    base = g.samples
    acc = None
    e = int(k)
    while True:
        if e & 1:
            acc = base if acc is None else _matmul(acc, base, renormalize)
        e >>= 1
        if not e:
            break
        base = _matmul(base, base, renormalize)
    if renormalize and k == 1:
        acc = acc / frob(acc)[:, None, None]
    closure = None if g.closure is None else (lambda m: path_power(g.refined(m), k, renormalize))
    expected = None if g.expected_angle is None else k * g.expected_angle
    out = CoverElement(g.times, acc, "power", None, expected, closure,
                       unitary=g.unitary, scale_only=renormalize or g.scale_only)
    return out.check_coherence()


def refine_to_grid(g, times):
    times = np.asarray(times, dtype=float)
    m = len(times) - 1
    if m < 1 or not np.allclose(times, uniform_grid(m), rtol=0, atol=1e-12):
        raise NotRefinable("only uniform grids can be regenerated")
    if m % g.steps:
        raise NotRefinable(f"grid of {m} steps does not contain the grid of {g.steps} steps")
    return g.refined(m)


# -- generators ---------------------------------------------------------------

def identity_path(n, m=None):
    def build(m):
        s = np.broadcast_to(np.eye(2 * n), (m + 1, 2 * n, 2 * n)).copy()
        return CoverElement(uniform_grid(m), s, "identity", {"n": n}, 0.0, build, unitary=True)
    return build(DEFAULT_STEPS if m is None else m)


def _embed_diag_phases(angles):
    """Stack of embeddings of ``diag(exp(i angles[k]))`` for each row of ``angles``."""
    k, n = angles.shape
    out = np.zeros((k, 2 * n, 2 * n))
    idx = np.arange(n)
    c, s = np.cos(angles), np.sin(angles)
    out[:, idx, idx] = c
    out[:, idx + n, idx + n] = c
    out[:, idx + n, idx] = s
    out[:, idx, idx + n] = -s
    return out


def gen_phase_path(theta, m=None):
    """``t -> diag(exp(i t theta_j))`` embedded in Sp(2n); lifted angle sum(theta)/2pi."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))

    def build(m):
        if abs(theta.sum()) / m >= DEFAULT.max_step:
            raise RefinementNeeded(f"total phase {theta.sum():.3f} too large for {m} steps")
        t = uniform_grid(m)
        s = _embed_diag_phases(t[:, None] * theta[None, :])
        return CoverElement(t, s, "phase", {"theta": theta.tolist()},
                            float(theta.sum() / (2 * np.pi)), build, unitary=True)

    return _generated(build, m)


def unitary_path_from_params(params, m=None):
    """``t -> prod_k G_k(t angle_k) diag(exp(i t phase))``, a path in U(n) from I."""
    def build(m):
        t = uniform_grid(m)
        s = UnitarySymplectic.from_complex(params.at(t)).matrix
        s[0] = np.eye(2 * params.n)
        payload = {"n": params.n, "givens": [list(g) for g in params.givens],
                   "phases": list(params.phases)}
        out = CoverElement(t, s, "unitary", payload, params.total_phase / (2 * np.pi),
                           build, unitary=True)
        return out.check_coherence()

    return _generated(build, m)


def gen_unitary_path(n, seed=0, m=None):
    return unitary_path_from_params(random_unitary_params(n, seed), m)


def iota(P, m=None):
    """The canonical path ``t -> P**t`` inside the SPD symplectic set."""
    P = np.asarray(P, dtype=float)
    half_dim(P)

    def build(m):
        t = uniform_grid(m)
        s = spd_power(P, t)
        s[0] = np.eye(len(P))
        return CoverElement(t, s, "spd", {"P": P.tolist()}, 0.0, build).check_coherence()

    return _generated(build, m)


def _project_symplectic(samples):
    """Re-project near-symplectic samples by rebuilding both polar factors.

    The orthogonal factor is replaced by the unitary nearest its complex-linear
    part; the positive factor by ``exp`` of the J0-anticommuting part of its log.
    """
    n = samples.shape[-1] // 2
    j = standard_j(n)
    orth, pos = polar_newton(samples)
    unitary, _ = polar_newton(UnitarySymplectic.from_matrix(orth).matrix)
    eig = jacobi_eigh(pos)
    log = (eig.rotation * np.log(eig.eigenvalues)[..., None, :]) @ np.swapaxes(eig.rotation, -1, -2)
    log = 0.5 * (log + j @ log @ j)
    log = 0.5 * (log + np.swapaxes(log, -1, -2))
    return unitary @ spd_exp(log)


def gen_hamiltonian_path(S, m=None, generator="hamiltonian"):
    """Flow of ``Psi' = J0 S Psi`` by one classical RK4 step per grid interval,
    followed by symplectic re-projection of every sample."""
    S = np.asarray(S, dtype=float)
    n = half_dim(S)
    if frob(S - S.T) > DEFAULT.sym * max(1.0, frob(S)):
        raise ValueError("S must be symmetric")
    X = standard_j(n) @ S

    def build(m):
        hX = X / m
        eye = np.eye(2 * n)
        step = eye + hX @ (eye + hX @ (eye / 2 + hX @ (eye / 6 + hX / 24)))
        raw = np.empty((m + 1, 2 * n, 2 * n))
        raw[0] = eye
        for i in range(m):
            raw[i + 1] = step @ raw[i]
        s = _project_symplectic(raw)
        s[0] = eye
        return CoverElement(uniform_grid(m), s, generator, {"S": S.tolist()},
                            None, build).check_coherence()

    return _generated(build, m)


def shear_hamiltonian(n):
    """``S = diag(0, -I)``, for which ``J0 S = [[0, I], [0, 0]]`` is nilpotent."""
    S = np.zeros((2 * n, 2 * n))
    S[n:, n:] = -np.eye(n)
    return S


def gen_shear_path(n=1, m=None):
    """Path ``t -> [[I, tI], [0, I]]`` ending at the shear ``[[I, I], [0, I]]``."""
    return gen_hamiltonian_path(shear_hamiltonian(n), m, generator="shear")


def random_hamiltonian(n, scale=1.0, seed=0):
    """Symmetric 2n x 2n matrix, upper triangle row by row, entries uniform in [-scale, scale]."""
    return _random_symmetric(SplitMix64(seed), 2 * n, scale)


# -- serialization ------------------------------------------------------------

def _regenerate(generator, params, m):
    if generator == "phase":
        return gen_phase_path(params["theta"], m)
    if generator == "unitary":
        up = UnitaryParams(int(params["n"]), tuple(tuple(g) for g in params["givens"]),
                           tuple(params["phases"]))
        return unitary_path_from_params(up, m)
    if generator == "spd":
        return iota(params["P"], m)
    if generator in ("hamiltonian", "shear"):
        return gen_hamiltonian_path(params["S"], m, generator=generator)
    if generator == "identity":
        return identity_path(int(params["n"]), m)
    return None


def to_json(g):
    d = 2 * g.n
    return {
        "n": g.n,
        "times": [float(t) for t in g.times],
        "samples": [[float(x) for x in s.reshape(d * d)] for s in g.samples],
        "meta": {"generator": g.generator, "expected_angle": g.expected_angle,
                 "params": g.params},
    }


def from_json(obj):
    """Ingest a path object; the generator closure is restored only when
    regenerating from ``meta.params`` reproduces the stored samples."""
    try:
        n = int(obj["n"])
        times = np.asarray(obj["times"], dtype=float)
        samples = np.asarray(obj["samples"], dtype=float).reshape(len(obj["samples"]), 2 * n, 2 * n)
        meta = obj.get("meta") or {}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidPath(f"malformed path object: {exc}") from exc
    if n < 1:
        raise InvalidPath("n must be positive")
    generator = meta.get("generator")
    params = meta.get("params")
    expected = meta.get("expected_angle")
    g = CoverElement(times, samples, generator, params,
                     None if expected is None else float(expected))
    validate(g)
    m = len(times) - 1
    if generator and params and np.allclose(times, uniform_grid(m), rtol=0, atol=1e-12):
        try:
            regen = _regenerate(generator, params, m)
        except Exception:
            regen = None
        if regen is not None and np.max(np.abs(regen.samples - samples)) <= 1e-9:
            g = replace(g, closure=regen.closure, unitary=regen.unitary)
    return g
