"""Acceptance criteria at full corpus size and the stated tolerances.

Each test records one PASS/FAIL line, printed together at the end of the run.
D_hat, the a-priori bound on the homogenization error constant, is n.
"""
import time

import numpy as np
import pytest

from maslovqm import qm
from maslovqm.corpus import FAMILIES, mixed_element, phase_loop, product
from maslovqm.cover import (gen_hamiltonian_path, gen_phase_path, gen_shear_path,
                            identity_path, path_inverse, path_power, refine_until)
from maslovqm.numerics import complex_det, frob, jacobi_eigh, polar_newton, spd_power
from maslovqm.rotation import lifted_angle, loop_index, unwrapped_angle2x2

M_MAX = 12
SLACK = 1e-6
SEED = 0


def worst(checks):
    return max(c.max_violation for c in checks), max(c.tolerance for c in checks)


def test_01_det_restriction(record):
    t0 = time.perf_counter()
    checks = [qm.check_det_restriction(n, 100, SEED, M_MAX, 1e-8) for n in (1, 2, 3)]
    ok = all(c.passed for c in checks)
    v, _ = worst(checks)
    record(1, "det(X+iY) = exp(2 pi i mu) on unitary paths", ok,
           f"max |exp(2 pi i mu) - det| = {v:.2e} <= 1e-08, 300 paths, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


def test_02_vanishing_on_positive_paths(record):
    t0 = time.perf_counter()
    checks = [qm.check_iota_vanishing(n, 100, SEED, 1.0, M_MAX, SLACK)[0] for n in (1, 2, 3)]
    ok = all(c.passed for c in checks)
    v, _ = worst(checks)
    record(2, "mu(iota(P)) = 0 at every level m <= 12", ok,
           f"max |a_m| = {v:.2e} <= 1e-06, 300 paths, {time.perf_counter() - t0:.1f}s")
    assert ok


@pytest.fixture(scope="module")
def homogeneity_corpora():
    return {n: qm.homogeneity_corpus(n, 50, SEED) for n in (1, 2)}


@pytest.fixture(scope="module")
def homogeneity_checks(homogeneity_corpora):
    return {n: qm.check_homogeneity(n, 50, SEED, m_max=M_MAX, d_hat=float(n), slack=SLACK,
                                    corpus=corpus)
            for n, corpus in homogeneity_corpora.items()}


def test_03_homogeneity(record, homogeneity_checks):
    parts = [c for checks in homogeneity_checks.values() for c in checks
             if c.name.startswith("homogeneity_k")]
    ok = all(c.passed for c in parts)
    detail = ", ".join(f"n={n} k={c.name[-1]} {c.max_violation:.1e}/{c.tolerance:.1e}"
                       for n, checks in homogeneity_checks.items() for c in checks
                       if c.name.startswith("homogeneity_k"))
    record(3, "mu(g^k) = k mu(g), k in {2,3,5}", ok,
           f"violation/tolerance {detail}; 100 elements")
    assert ok


def test_04_conjugation_and_inverse(record):
    t0 = time.perf_counter()
    checks = [c for n in (1, 2) for c in qm.check_conjugation_and_inverse(n, 50, SEED, M_MAX, float(n), SLACK)]
    ok = all(c.passed for c in checks)
    detail = ", ".join(f"{c.name} {c.max_violation:.1e}/{c.tolerance:.1e}" for c in checks)
    record(4, "conjugation invariance and mu(g^-1) = -mu(g)", ok,
           f"{detail}; 100 triples, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_05_conjugated_positive(record):
    t0 = time.perf_counter()
    checks = [qm.check_conjugated_positive(n, 100, SEED, 1.0, M_MAX, SLACK) for n in (1, 2, 3)]
    ok = all(c.passed for c in checks)
    v, _ = worst(checks)
    record(5, "mu(iota(Q P Q^T)) = mu(iota(P))", ok,
           f"max violation {v:.2e} <= 1e-06, 300 pairs, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_06_loops(record):
    t0 = time.perf_counter()
    bad, gap = [], 0.0
    for n in (1, 2, 3):
        for k in range(-3, 4):
            g = phase_loop(n, k)
            gap = max(gap, abs(lifted_angle(g).value - k))
            if loop_index(g) != k:
                bad.append((n, k))
    ok = not bad and gap <= 1e-6
    record(6, "Maslov index of phase loops equals winding", ok,
           f"21 loops, index mismatches {len(bad)}, max |angle - k| = {gap:.1e}, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


def test_07_defect_regression(record):
    t0 = time.perf_counter()
    check, scan = qm.check_defect_regression(1, 1000, SEED)
    base = qm.load_defect_baseline()
    ok = check.passed and np.isfinite(scan.max_defect)
    record(7, "defect bounded, regression against committed baseline", ok,
           f"max defect {scan.max_defect:.12f} <= baseline {base['max_defect']:.12f} + 1e-9, "
           f"1000 pairs, {time.perf_counter() - t0:.1f}s")
    assert ok


def test_08_convergence(record, homogeneity_checks):
    conv = {n: next(c for c in checks if c.name == "homogenization_convergence")
            for n, checks in homogeneity_checks.items()}
    ok = all(c.passed for c in conv.values())
    detail = ", ".join(f"n={n} median {c.max_violation:.3f}" for n, c in conv.items())
    record(8, "terminal ratio |a_m+1 - a_m| / |a_m - a_m-1| <= 0.6", ok, detail)
    assert ok


def oracle_corpus():
    """Every n = 1 generator, plus products, inverses and powers of them."""
    out = [identity_path(1), gen_shear_path(1)]
    out += [gen_phase_path([t]) for t in (-7.0, -1.0, 0.3, np.pi / 3, 2 * np.pi, 12.0)]
    out += [gen_hamiltonian_path(np.diag([a, -a])) for a in (0.3, 1.0, 2.5)]
    for kind, family in FAMILIES.items():
        out += [family(1, seed, 1.0) for seed in range(25)]
    mixed = [mixed_element(1, s) for s in range(10)]
    out += [product(a, b) for a, b in zip(mixed[::2], mixed[1::2])]
    out += [path_inverse(g) for g in mixed]
    out += [refine_until(lambda m, g=g: path_power(g.refined(m), 3), g.steps) for g in mixed[:5]]
    return out


def test_09_oracle(record):
    t0 = time.perf_counter()
    corpus = oracle_corpus()
    gap = max(abs(lifted_angle(g).value - unwrapped_angle2x2(g)) for g in corpus)
    ok = gap <= 1e-9
    record(9, "Newton-polar angle equals closed-form 2x2 angle (n=1)", ok,
           f"max gap {gap:.1e} turns <= 1e-09 over {len(corpus)} paths, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok


def _conditioned(rng, d, cond=1e6):
    q1, _ = np.linalg.qr(rng.standard_normal((d, d)))
    q2, _ = np.linalg.qr(rng.standard_normal((d, d)))
    s = np.exp(rng.uniform(0, np.log(cond), d))
    s[0], s[-1] = 1.0, cond
    return (q1 * s) @ q2


def test_10_kernels(record):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240101)
    eig_err = orth_err = polar_err = polar_orth = pow_err = det_err = 0.0
    for i in range(1000):
        d = 1 + i % 8
        a = rng.standard_normal((d, d))
        S = a + a.T
        e = jacobi_eigh(S)
        eig_err = max(eig_err, frob(e.reconstruct() - S) / frob(S))
        orth_err = max(orth_err, frob(e.rotation.T @ e.rotation - np.eye(d)))

        A = _conditioned(rng, d) if d > 1 else rng.uniform(0.5, 2, (1, 1))
        U, P = polar_newton(A)
        polar_err = max(polar_err, frob(A - U @ P) / frob(A))
        polar_orth = max(polar_orth, frob(U.T @ U - np.eye(d)))

        B = rng.standard_normal((d, d))
        Pd = B @ B.T + 0.5 * np.eye(d)
        s, t = rng.uniform(-1, 2, 2)
        ref = spd_power(Pd, s + t)
        pow_err = max(pow_err, frob(spd_power(Pd, s) @ spd_power(Pd, t) - ref) / frob(ref))

        X = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
        Y = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
        dx, dy = complex_det(X), complex_det(Y)
        det_err = max(det_err, abs(complex_det(X @ Y) - dx * dy) / abs(dx * dy))
    ok = (eig_err <= 1e-10 and orth_err <= 1e-10 and polar_err <= 1e-9 and polar_orth <= 1e-10
          and pow_err <= 1e-9 and det_err <= 1e-10)
    record(10, "kernel invariants over 1000 samples each", ok,
           f"eigh recon {eig_err:.1e}, eigh orth {orth_err:.1e}, polar recon {polar_err:.1e}, "
           f"polar orth {polar_orth:.1e}, power law {pow_err:.1e}, det mult {det_err:.1e}, "
           f"{time.perf_counter() - t0:.1f}s")
    assert ok
