"""Fast self-consistency checks across the package, one named result each.

These are the invariants the physics guarantees exactly (up to numerical
tolerance); any failure means a broken build rather than a bad parameter
choice.  The whole battery runs in a few seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import poisson

from . import fock, hom, memory, noise, polarization, spdc

RT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _beamsplitter_unitarity():
    u = fock.beam_splitter(0.43).fock_unitary(12)
    resid = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
    return resid < 1e-10, f"max |U^dag U - I| = {resid:.3e}"


def _displacement_inverse():
    n_max, block = 60, 30
    prod = fock.displacement_operator(0.7, n_max) @ fock.displacement_operator(-0.7, n_max)
    resid = float(np.max(np.abs(prod[:block, :block] - np.eye(n_max + 1)[:block, :block])))
    return resid < 1e-10, f"max |D(a)D(-a) - I| = {resid:.3e} on the first {block} levels"


def _bell_chsh():
    s = polarization.chsh_value(polarization.bell_state())
    dev = abs(s - 2.0 * RT2)
    return dev < 1e-12, f"|S - 2 sqrt 2| = {dev:.3e}"


def _werner_witnesses():
    worst = 0.0
    for w in (0.2, 0.6, 0.94):
        rho = polarization.werner_state(w)
        worst = max(
            worst,
            abs(polarization.chsh_maximum(rho) - 2.0 * RT2 * w),
            abs(polarization.ppt_min_eigenvalue(rho) - (1.0 - 3.0 * w) / 4.0),
            abs(polarization.concurrence(rho) - max(0.0, (3.0 * w - 1.0) / 2.0)),
        )
    return worst < 1e-10, f"worst closed-form deviation = {worst:.3e}"


def _poisson_series():
    p = noise.ExperimentParams()
    worst = 0.0
    for mu in (0.5, 13.3, 86.0):
        lam = 2.0 * mu * p.eta * (1.0 - p.vis)
        n = np.arange(0, 200)
        series = float(np.sum(poisson.pmf(n, mu) * (1.0 - lam / mu) ** n))
        worst = max(worst, abs(noise.noise_click_prob(mu, p.eta, p.vis)
                               - (1.0 - series)))
    return worst < 1e-12, f"worst series deviation = {worst:.3e}"


def _guessing_monotone():
    from . import macro
    pair = macro.macro_components(RT2, 60)
    vals = [macro.guessing_probability(pair, s) for s in (0.0, 0.5, 1.0, 2.0, 4.0)]
    diffs = np.diff(vals)
    return bool(np.all(diffs <= 1e-12)), f"max increase = {float(diffs.max()):.3e}"


def _memory_null_residual():
    resid = memory.back_displacement_residual(1.3 + 0.2j, math.pi,
                                              memory.MemoryParams())
    return resid < 1e-12, f"residual at phi = pi is {resid:.3e}"


def _loop_noise_ratio():
    params = memory.MemoryParams()
    alpha, sigma = 2.0, 0.2
    mean_resid = memory.mean_residual_photons(alpha, sigma, params)
    one_minus_v = 1.0 - memory.visibility_from_errors(0.0, sigma)
    ratio = mean_resid / (2.0 * alpha**2 * params.eta * one_minus_v)
    target = 2.0 * params.eta_t
    ok = abs(ratio - target) <= 0.1 * target
    return ok, f"residual/leak-rate ratio = {ratio:.4f}, expected {target:.4f}"


def _detailed_joints():
    p = spdc.DetailedParams()
    worst = 0.0
    for th_a in np.deg2rad([0.0, 22.5, 45.0, 67.5]):
        for th_b in np.deg2rad([0.0, 22.5, 45.0, 67.5]):
            j = spdc.joint_probabilities(float(th_a), float(th_b), p)
            worst = max(worst, abs(j.renormalized().total() - 1.0))
    return worst < 1e-12, f"worst renormalized-sum deviation = {worst:.3e}"


def _hom_dip():
    one = np.zeros(5)
    one[1] = 1.0
    rho = np.kron(np.diag(one), np.diag(one)).astype(complex)
    c = hom.coincidence_from_joint(rho, 4, fock.ClickDetector(1.0, 0.0))
    return abs(c) < 1e-12, f"two-photon coincidence = {c:.3e}"


CHECKS = (
    ("beamsplitter-unitarity", _beamsplitter_unitarity),
    ("displacement-inverse", _displacement_inverse),
    ("bell-chsh", _bell_chsh),
    ("werner-witnesses", _werner_witnesses),
    ("poisson-series", _poisson_series),
    ("guessing-monotone", _guessing_monotone),
    ("memory-null-residual", _memory_null_residual),
    ("loop-noise-ratio", _loop_noise_ratio),
    ("detailed-joints", _detailed_joints),
    ("hom-dip", _hom_dip),
)


def run_all() -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail))
    return results
