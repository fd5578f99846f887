import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maslovqm.errors import NotUnitary, OddDimension
from maslovqm.numerics import frob
from maslovqm.rng import SplitMix64
from maslovqm.symplectic import (UnitarySymplectic, det_u, hamiltonian_generator,
                                 is_spd_symplectic, is_symplectic, random_spd_symplectic,
                                 random_symplectic, random_unitary_params,
                                 random_unitary_symplectic, spd_exp, standard_j,
                                 symplectic_polar)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 3)


def rotation(phi):
    return np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])


def test_splitmix_reference_stream():
    # published SplitMix64 outputs for seed 1234567
    rng = SplitMix64(1234567)
    assert [rng.next_u64() for _ in range(3)] == [
        6457827717110365317, 3203168211198807973, 9817491932198370423]


def test_splitmix_unit_interval():
    rng = SplitMix64(0)
    xs = [rng.random() for _ in range(1000)]
    assert min(xs) >= 0.0 and max(xs) < 1.0


def test_standard_j():
    assert np.array_equal(standard_j(1), [[0, -1], [1, 0]])
    j = standard_j(3)
    assert np.array_equal(j @ j, -np.eye(6))
    assert np.array_equal(j.T, -j)


def test_is_symplectic_examples():
    assert is_symplectic(np.eye(4)) == (True, 0.0)
    assert is_symplectic(np.diag([2.0, 0.5])).ok
    check = is_symplectic(np.diag([2.0, 2.0]))
    assert not check.ok
    assert check.residual == pytest.approx(3 * np.sqrt(2))


def test_odd_dimension():
    with pytest.raises(OddDimension):
        is_symplectic(np.eye(3))


def test_polar_of_positive_is_trivial():
    P = random_spd_symplectic(2, 1.0, 3)
    u, p = symplectic_polar(P)
    assert frob(u.matrix - np.eye(4)) <= 1e-10
    assert frob(p - P) <= 1e-10


def test_polar_of_j():
    u, p = symplectic_polar(standard_j(2))
    assert np.allclose(u.X, 0, atol=1e-14) and np.allclose(u.Y, np.eye(2), atol=1e-14)
    assert np.allclose(p, np.eye(4), atol=1e-14)


def test_polar_of_shear():
    u, _ = symplectic_polar(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert np.angle(u.complex[0, 0]) == pytest.approx(-0.4636476, abs=1e-7)


def test_det_u_examples():
    assert det_u(UnitarySymplectic.from_complex(np.eye(3))) == pytest.approx(1.0)
    theta = 0.7
    u = UnitarySymplectic.from_matrix(rotation(theta))
    assert det_u(u) == pytest.approx(np.exp(1j * theta))
    a, b = 0.3, -1.1
    u = UnitarySymplectic.from_complex(np.diag(np.exp(1j * np.array([a, b]))))
    assert det_u(u) == pytest.approx(np.exp(1j * (a + b)))


def test_det_u_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        det_u(UnitarySymplectic.from_complex(2 * np.eye(2)))


def test_embedding_round_trip():
    u = random_unitary_symplectic(3, 5)
    assert frob(UnitarySymplectic.from_matrix(u.matrix).complex - u.complex) == 0
    assert is_symplectic(u.matrix).ok
    assert frob(u.matrix.T @ u.matrix - np.eye(6)) <= 1e-12


def test_spd_exp_examples():
    assert np.allclose(spd_exp(hamiltonian_generator(np.zeros((2, 2)), np.zeros((2, 2)))), np.eye(4))
    a = 0.8
    P = spd_exp(hamiltonian_generator(np.array([[a]]), np.array([[0.0]])))
    assert np.allclose(P, np.diag([np.exp(a), np.exp(-a)]))


def test_unitary_params_examples():
    params = random_unitary_params(1, 0)
    assert params.givens == ()
    theta = params.phases[0]
    u = UnitarySymplectic.from_complex(params.at(1.0))
    assert u.X[0, 0] == pytest.approx(np.cos(theta)) and u.Y[0, 0] == pytest.approx(np.sin(theta))
    assert np.allclose(params.at(0.0), np.eye(1))
    stack = random_unitary_params(3, 9).at(np.linspace(0, 1, 5))
    assert stack.shape == (5, 3, 3)


def test_generators_are_deterministic():
    assert np.array_equal(random_symplectic(2, 1.0, 11), random_symplectic(2, 1.0, 11))
    assert not np.array_equal(random_symplectic(2, 1.0, 11), random_symplectic(2, 1.0, 12))


def test_random_spd_scale_must_be_positive():
    with pytest.raises(ValueError):
        random_spd_symplectic(1, 0.0)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=dims)
def test_polar_factors_stay_in_group(seed, n):
    psi = random_symplectic(n, 1.0, seed)
    assert is_symplectic(psi).ok
    u, p = symplectic_polar(psi)
    assert u.unitarity_residual() <= 1e-10
    assert is_symplectic(u.matrix).ok
    assert is_spd_symplectic(p)
    assert frob(u.matrix @ p - psi) <= 1e-9 * frob(psi)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=dims)
def test_polar_round_trip(seed, n):
    Q = random_unitary_symplectic(n, seed)
    P = random_spd_symplectic(n, 1.0, seed + 1)
    u, p = symplectic_polar(Q.matrix @ P)
    assert frob(u.matrix - Q.matrix) <= 1e-8
    assert frob(p - P) <= 1e-8 * frob(P)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=dims)
def test_positive_sets(seed, n):
    P = random_spd_symplectic(n, 1.0, seed)
    j = standard_j(n)
    assert frob(P @ j @ P - j) <= 1e-7 * (1 + frob(P) ** 2)
    Q = random_unitary_symplectic(n, seed + 1).matrix
    QPQ = Q @ P @ Q.T
    assert is_spd_symplectic(0.5 * (QPQ + QPQ.T))
    P2 = j @ np.linalg.inv(P) @ j.T
    assert is_spd_symplectic(0.5 * (P2 + P2.T))


@settings(max_examples=40, deadline=None)
@given(seed=seeds, n=dims)
def test_det_u_multiplicative(seed, n):
    u1 = random_unitary_symplectic(n, seed)
    u2 = random_unitary_symplectic(n, seed + 1)
    prod = UnitarySymplectic.from_complex(u1.complex @ u2.complex)
    assert abs(det_u(prod) - det_u(u1) * det_u(u2)) <= 1e-9
    assert abs(abs(det_u(u1)) - 1) <= 1e-10
