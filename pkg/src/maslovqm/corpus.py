"""Seeded families of cover elements used by the property checks.

Each family is a pure function of ``(n, seed, scale)``; the draws follow the
SplitMix64 order documented on each function.
"""
import numpy as np

from .cover import (gen_hamiltonian_path, gen_phase_path, gen_unitary_path, iota,
                    path_product, refine_until, unitary_path_from_params)
from .rng import SplitMix64
from .symplectic import (_draw_spd, _draw_unitary_params, _random_symmetric,
                         random_spd_symplectic)


def product(*elements):
    """Left-to-right path product, regenerating on a finer grid if needed."""
    def build(m):
        out = elements[0].refined(m)
        for e in elements[1:]:
            out = path_product(out, e.refined(m))
        return out
    return refine_until(build, max(e.steps for e in elements))


def unitary_element(n, seed, m=None):
    return gen_unitary_path(n, seed, m)


def spd_element(n, seed, scale=1.0, m=None):
    return iota(random_spd_symplectic(n, scale, seed), m)


def hamiltonian_element(n, seed, scale=1.0, m=None):
    return gen_hamiltonian_path(_random_symmetric(SplitMix64(seed), 2 * n, scale), m)


def mixed_element(n, seed, scale=1.0, m=None):
    """``u * iota(P) * h``: a unitary path, a positive path and a Hamiltonian flow.

    Draw order from one stream: unitary parameters, then ``P`` with scale
    ``scale / 2``, then the 2n x 2n Hamiltonian ``S`` with scale ``scale``.
    """
    rng = SplitMix64(seed)
    u = unitary_path_from_params(_draw_unitary_params(rng, n), m)
    p = iota(_draw_spd(rng, n, 0.5 * scale), m)
    h = gen_hamiltonian_path(_random_symmetric(rng, 2 * n, scale), m)
    return product(u, p, h)


def phase_loop(n, k, m=None):
    """Loop winding ``k`` times in total, integer windings spread over the ``n`` phases."""
    windings = [k // n + (1 if j < k % n else 0) for j in range(n)]
    return gen_phase_path(2 * np.pi * np.asarray(windings, dtype=float), m)


FAMILIES = {
    "unitary": lambda n, seed, scale, m=None: unitary_element(n, seed, m),
    "spd": spd_element,
    "hamiltonian": hamiltonian_element,
    "mixed": mixed_element,
}
