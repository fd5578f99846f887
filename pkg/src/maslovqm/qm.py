"""The homogeneous quasimorphism mu and the executable property suite.

``mu(g)`` is the limit of ``a_m = rho(g^(2^m)) / 2^m`` where ``rho`` is the
lifted rotation number.  The default route evaluates the power sequence
exactly through the squaring identity

    rho(g^(2K)) = 2 rho(g^K) + c(M^K, M^K),      M = endpoint of g,

with ``c`` the bounded cocycle of :func:`maslovqm.rotation.rotation_cocycle`.
The Siegel coordinates of ``M^K`` are propagated by a Moebius recursion that
only touches bounded quantities, so no power matrix is ever formed.  The
literal route (``method="power"``) lifts the renormalized pointwise power path
instead; it agrees with the default at low levels but loses the subdominant
singular directions in double precision once the power spreads the spectrum
past ~1e16.
"""
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from .config import DEFAULT, MAX_STEPS
from .corpus import (FAMILIES, mixed_element, phase_loop, product, spd_element,
                     unitary_element)
from .cover import iota, path_inverse, path_power, refine_until
from .errors import StepTooLarge
from .numerics import frob
from .rotation import (complex_parts, cocycle_from_siegel, lifted_angle, loop_index,
                       rotation_cocycle)
from .symplectic import (UnitarySymplectic, det_u, is_spd_symplectic,
                         random_spd_symplectic, random_unitary_symplectic, standard_j)


@dataclass(frozen=True)
class MuValue:
    value: float          # turns
    m_used: int
    err_bound: float      # d_hat / 2**m_used
    converged: bool
    sequence: tuple = ()  # a_0 .. a_{m_used}

    def to_dict(self):
        return {"value": self.value, "m_used": self.m_used, "err_bound": self.err_bound,
                "converged": self.converged}


def resolved_angle(g):
    """Lifted angle of ``g``, regenerating it on doubled grids while under-resolved."""
    while True:
        try:
            return g, lifted_angle(g)
        except StepTooLarge:
            if g.closure is None or 2 * g.steps > MAX_STEPS:
                raise
            g = g.refined(2 * g.steps)


def power_cocycles(M):
    """Yield ``c(M^K, M^K)`` for ``K = 1, 2, 4, ...``."""
    Z, W = complex_parts(M)
    Zc, Wc = np.conj(Z), np.conj(W)
    n = len(Z)
    left = np.zeros((n, n), dtype=complex)   # Z^-1 W of M^K
    right = np.zeros((n, n), dtype=complex)  # conj(W) Z^-1 of M^K
    k, target = 0, 1
    while True:
        while k < target:
            left = np.linalg.solve(Z + left @ Wc, W + left @ Zc)
            right = (Wc + Zc @ right) @ np.linalg.inv(Z + W @ right)
            k += 1
        yield cocycle_from_siegel(left, right)
        target *= 2


def _cocycle_sequence(g, m_max, stop):
    g, base = resolved_angle(g)
    a = [base.value]
    cocycles = power_cocycles(g.endpoint)
    for m in range(1, m_max + 1):
        a.append(a[-1] + next(cocycles) / 2 ** m)
        if stop is not None and stop(a):
            break
    return a


def _power_sequence(g, m_max, stop):
    a = []
    for m in range(m_max + 1):
        k = 2 ** m
        gk = refine_until(lambda s: path_power(g.refined(s), k, renormalize=True), g.steps)
        a.append(lifted_angle(gk).value / k)
        if m and stop is not None and stop(a):
            break
    return a


def homogenization_sequence(g, m_max=12, method="cocycle", stop=None):
    """``[a_0, ..., a_m_max]`` with ``a_m = rho(g^(2^m)) / 2^m``."""
    if method == "cocycle":
        return _cocycle_sequence(g, m_max, stop)
    if method == "power":
        return _power_sequence(g, m_max, stop)
    raise ValueError(f"unknown method {method!r}")


def _ends_unitary(g):
    M = g.endpoint
    return frob(M.T @ M - np.eye(len(M))) <= DEFAULT.orth


def mu(g, m_max=12, tol=1e-6, d_hat=None, method="cocycle"):
    """Homogenized rotation number of a cover element.

    Stops at the first ``m`` with ``|a_m - a_(m-1)| <= tol / 2`` or at
    ``m_max``.  When the endpoint is unitary every cocycle term vanishes, the
    sequence is constant and the value is returned at ``m = 0``.
    """
    if not 0 <= m_max <= 20:
        raise ValueError("m_max must lie in [0, 20]")
    d_hat = float(g.n) if d_hat is None else float(d_hat)
    if m_max == 0 or _ends_unitary(g):
        _, base = resolved_angle(g)
        return MuValue(base.value, 0, d_hat, _ends_unitary(g), (base.value,))
    stop = lambda a: abs(a[-1] - a[-2]) <= tol / 2
    a = homogenization_sequence(g, m_max, method, stop)
    m = len(a) - 1
    return MuValue(a[-1], m, d_hat / 2 ** m, bool(stop(a)), tuple(a))


def terminal_ratio(sequence):
    """``|a_m - a_(m-1)| / |a_(m-1) - a_(m-2)|`` at the last level, None if undefined."""
    if len(sequence) < 3:
        return None
    num = abs(sequence[-1] - sequence[-2])
    den = abs(sequence[-2] - sequence[-3])
    if den == 0.0:
        return None
    return num / den


# -- defect -------------------------------------------------------------------

@dataclass(frozen=True)
class DefectSample:
    g_seed: int
    h_seed: int
    defect: float                     # |rho(gh) - rho(g) - rho(h)|, turns
    cocycle: float                    # closed-form value of the same quantity, signed
    mu_defect: Optional[float] = None


@dataclass
class DefectScan:
    samples: list = field(default_factory=list)

    @property
    def max_defect(self):
        return max((s.defect for s in self.samples), default=0.0)

    @property
    def max_mu_defect(self):
        vals = [s.mu_defect for s in self.samples if s.mu_defect is not None]
        return max(vals) if vals else None

    def to_dict(self):
        return {"count": len(self.samples), "max_defect": self.max_defect,
                "max_mu_defect": self.max_mu_defect,
                "samples": [vars(s) for s in self.samples]}


def defect_scan(n=1, count=1000, seed=0, kind="mixed", scale=1.0, include_mu=False,
                m_max=12):
    """Measure the quasimorphism defect over ``count`` seeded pairs.

    Pair ``i`` uses seeds ``seed + 2i`` and ``seed + 2i + 1`` of one corpus family.
    """
    family = FAMILIES[kind]
    scan = DefectScan()
    for i in range(count):
        gs, hs = seed + 2 * i, seed + 2 * i + 1
        g, h = family(n, gs, scale), family(n, hs, scale)
        gh = product(g, h)
        _, rg = resolved_angle(g)
        _, rh = resolved_angle(h)
        _, rgh = resolved_angle(gh)
        defect = abs(rgh.value - rg.value - rh.value)
        mu_defect = None
        if include_mu:
            mu_defect = abs(mu(gh, m_max).value - mu(g, m_max).value - mu(h, m_max).value)
        scan.samples.append(DefectSample(gs, hs, defect,
                                         rotation_cocycle(g.endpoint, h.endpoint), mu_defect))
    return scan


def load_defect_baseline():
    text = resources.files("maslovqm").joinpath("data/defect_baseline.json").read_text()
    return json.loads(text)


# -- property checks ----------------------------------------------------------

@dataclass(frozen=True)
class PropertyCheck:
    name: str
    samples: int
    max_violation: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_violation <= self.tolerance)

    def to_dict(self):
        return {"name": self.name, "samples": self.samples,
                "max_violation": self.max_violation, "tolerance": self.tolerance,
                "pass": self.passed}


def _check(name, violations, tolerance):
    violations = list(violations)
    worst = max(violations) if violations else 0.0
    return PropertyCheck(name, len(violations), float(worst), float(tolerance))


def check_det_restriction(n, count, seed=0, m_max=12, tol=None):
    """``|exp(2 pi i mu) - det(X + iY)|`` at the endpoint of random unitary paths."""
    tol = DEFAULT.det_restriction if tol is None else tol
    viol = []
    for i in range(count):
        g = unitary_element(n, seed + i)
        value = mu(g, m_max).value
        d = det_u(UnitarySymplectic.from_matrix(g.endpoint))
        viol.append(abs(np.exp(2j * np.pi * value) - d))
    return _check("det_restriction", viol, tol)


def check_conjugation_and_inverse(n, count, seed=0, m_max=12, d_hat=None, slack=None):
    """Conjugation invariance and ``mu(g^-1) = -mu(g)`` on mixed elements."""
    d_hat = float(n) if d_hat is None else d_hat
    slack = DEFAULT.slack if slack is None else slack
    conj, inv = [], []
    for i in range(count):
        g = mixed_element(n, seed + 2 * i)
        h = mixed_element(n, seed + 2 * i + 1)
        mg = mu(g, m_max).value
        conj.append(abs(mu(product(h, g, path_inverse(h)), m_max).value - mg))
        inv.append(abs(mu(path_inverse(g), m_max).value + mg))
    tolerance = 2 * d_hat / 2 ** m_max + slack
    return [_check("conjugation_invariance", conj, tolerance),
            _check("inverse_antisymmetry", inv, tolerance)]


def check_conjugated_positive(n, count, seed=0, scale=1.0, m_max=12, slack=None):
    """``mu(iota(Q P Q^T)) = mu(iota(P))`` for unitary ``Q`` and positive ``P``."""
    slack = DEFAULT.slack if slack is None else slack
    viol = []
    for i in range(count):
        Q = random_unitary_symplectic(n, seed + i).matrix
        P = random_spd_symplectic(n, scale, seed + 10_000 + i)
        QPQ = Q @ P @ Q.T
        QPQ = 0.5 * (QPQ + QPQ.T)
        viol.append(abs(mu(iota(QPQ), m_max).value - mu(iota(P), m_max).value))
    return _check("conjugated_positive", viol, slack)


def check_iota_vanishing(n, count, seed=0, scale=1.0, m_max=12, slack=None):
    """``mu(iota(P)) = 0`` at every truncation level, plus the matrix chain
    ``J0 P^-1 J0^-1`` is positive symplectic and its path is the conjugated
    inverse path."""
    slack = DEFAULT.slack if slack is None else slack
    j = standard_j(n)
    levels, chain = [], []
    for i in range(count):
        P = random_spd_symplectic(n, scale, seed + i)
        g = iota(P)
        levels.append(max(abs(a) for a in homogenization_sequence(g, m_max)))
        P2 = j @ np.linalg.inv(P) @ j.T
        P2 = 0.5 * (P2 + P2.T)
        if not is_spd_symplectic(P2):
            chain.append(np.inf)
            continue
        conj_inv = j @ np.linalg.inv(g.samples) @ j.T
        chain.append(float(np.max(np.abs(iota(P2, g.steps).samples - conj_inv))))
    return [_check("iota_vanishing", levels, slack),
            _check("iota_inverse_chain", chain, 1e-8)]


def homogeneity_corpus(n, count, seed=0, ks=(2, 3, 5)):
    """Mixed elements with their pointwise powers, as ``[(g, {k: g^k})]``."""
    out = []
    for i in range(count):
        g = mixed_element(n, seed + i)
        powers = {k: refine_until(lambda s, k=k: path_power(g.refined(s), k), g.steps)
                  for k in ks}
        out.append((g, powers))
    return out


def check_homogeneity(n, count, seed=0, ks=(2, 3, 5), m_max=12, d_hat=None, slack=None,
                      corpus=None):
    """``|mu(g^k) - k mu(g)| <= (k + 1) d_hat / 2^m_max + slack`` for each ``k``.

    Also returns the convergence check: the median over elements of the
    terminal increment ratio of the homogenization sequence must be <= 0.6.
    """
    d_hat = float(n) if d_hat is None else d_hat
    slack = DEFAULT.slack if slack is None else slack
    corpus = homogeneity_corpus(n, count, seed, ks) if corpus is None else corpus
    viol = {k: [] for k in ks}
    ratios = []
    for g, powers in corpus:
        seq = homogenization_sequence(g, m_max)
        r = terminal_ratio(seq)
        if r is not None:
            ratios.append(r)
        mg = mu(g, m_max).value
        for k in ks:
            viol[k].append(abs(mu(powers[k], m_max).value - k * mg))
    checks = [_check(f"homogeneity_k{k}", viol[k], (k + 1) * d_hat / 2 ** m_max + slack)
              for k in ks]
    median = float(np.median(ratios)) if ratios else 0.0
    checks.append(PropertyCheck("homogenization_convergence", len(ratios), median, 0.6))
    return checks


def check_uniqueness_consistency(n, count, seed=0, m_max=12, d_hat=None, baseline=None,
                                 slack=None):
    """``|mu(u * iota(P)) - mu(u)| <= max(d_hat, baseline) + slack``."""
    d_hat = float(n) if d_hat is None else d_hat
    baseline = load_defect_baseline()["max_defect"] if baseline is None else baseline
    slack = DEFAULT.slack if slack is None else slack
    viol = []
    for i in range(count):
        u = unitary_element(n, seed + i)
        p = spd_element(n, seed + 10_000 + i)
        viol.append(abs(mu(product(u, p), m_max).value - mu(u, m_max).value))
    return _check("uniqueness_consistency", viol, max(d_hat, baseline) + slack)


def check_loop_index(n, ks=range(-3, 4)):
    """Phase loops of winding ``k`` have Maslov index ``k`` (reported as |index - k|)."""
    viol = []
    for k in ks:
        g = phase_loop(n, k)
        viol.append(max(abs(loop_index(g) - k), abs(lifted_angle(g).value - k)))
    return _check("pi1_isomorphism", viol, DEFAULT.loop_round)


def check_defect_regression(n=1, count=1000, seed=0, baseline=None):
    """Empirical max defect must not exceed the committed baseline by more than 1e-9."""
    baseline = load_defect_baseline()["max_defect"] if baseline is None else baseline
    scan = defect_scan(n, count, seed)
    return PropertyCheck("defect_regression", count, scan.max_defect, baseline + 1e-9), scan


@dataclass
class PropertyReport:
    checks: list
    corpus: dict
    baseline_defect: float

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        checks = sorted(self.checks, key=lambda c: c.name)
        return {"checks": [c.to_dict() for c in checks], "corpus": self.corpus,
                "baseline_defect": self.baseline_defect}


DEFAULT_SIZES = {"det_restriction": 20, "conjugation": 10, "conjugated_positive": 20,
                 "iota_vanishing": 20, "homogeneity": 10, "uniqueness": 10}


def run_suite(n=1, seed=0, sizes=None, m_max=12, d_hat=None, slack=None, det_tol=None,
              scale=1.0):
    """Run every check on seeded corpora and collect a :class:`PropertyReport`."""
    sizes = {**DEFAULT_SIZES, **(sizes or {})}
    d_hat = float(n) if d_hat is None else float(d_hat)
    baseline = load_defect_baseline()["max_defect"]
    checks = [check_det_restriction(n, sizes["det_restriction"], seed, m_max, det_tol)]
    checks += check_conjugation_and_inverse(n, sizes["conjugation"], seed, m_max, d_hat, slack)
    checks.append(check_conjugated_positive(n, sizes["conjugated_positive"], seed, scale, m_max, slack))
    checks += check_iota_vanishing(n, sizes["iota_vanishing"], seed, scale, m_max, slack)
    checks += check_homogeneity(n, sizes["homogeneity"], seed, m_max=m_max, d_hat=d_hat,
                                slack=slack)
    checks.append(check_uniqueness_consistency(n, sizes["uniqueness"], seed, m_max, d_hat,
                                               baseline, slack))
    checks.append(check_loop_index(n))
    corpus = {"n": n, "seed": seed, "sizes": dict(sorted(sizes.items())), "m_max": m_max,
              "d_hat": d_hat, "scale": scale}
    return PropertyReport(checks, corpus, baseline)
