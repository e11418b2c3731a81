"""Coarse-grained distinguishability of the two displaced macro components.

The two components are D(alpha)(|0> +- |1>)/sqrt(2).  A detector with
Gaussian resolution sigma sees their photon-number distributions convolved
with the kernel; the optimal single-shot guessing probability for equal
priors is P_g = 1/2 + (1/4) * L1 distance between the smoothed distributions
(maximum-likelihood decision).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .fock import (TAU_TRUNC, TruncationError, coherent_amplitudes,
                   displacement_operator)

#: default grid spacing (photons) for the Gaussian smoothing integral
GRID_SPACING = 0.05


class UnattainableTargetError(ValueError):
    """Requested guessing probability exceeds the sigma = 0 value."""


@dataclass(frozen=True)
class MacroComponentPair:
    """Photon-number distributions of the two macro components."""

    p_plus: np.ndarray
    p_minus: np.ndarray
    alpha: float

    def __post_init__(self):
        for p in (self.p_plus, self.p_minus):
            if abs(float(p.sum()) - 1.0) > TAU_TRUNC:
                raise TruncationError("component distribution does not sum to 1")
        sep = mean_photon(self.p_plus) - mean_photon(self.p_minus)
        if abs(sep - 2.0 * self.alpha) > 0.01 * (1.0 + self.alpha):
            raise ValueError(
                f"mean separation {sep:.4f} != 2 alpha = {2 * self.alpha:.4f}"
            )


@dataclass(frozen=True)
class CoarseDetector:
    """Photon-number measurement blurred by a Gaussian of width sigma.

    Decision rule: maximum-likelihood threshold on the smoothed outcome.
    """

    sigma: float

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    def guessing_probability(self, pair: "MacroComponentPair") -> float:
        return guessing_probability(pair, self.sigma)


@dataclass(frozen=True)
class SizeResult:
    p_g: float
    sigma_max: float
    n_eff: int


@dataclass(frozen=True)
class MixtureDescription:
    """Two-branch heralded state: entangled branch plus separable remainder."""

    alpha: float
    entangled_weight: float
    separable_weight: float

    def __post_init__(self):
        if not math.isclose(self.entangled_weight + self.separable_weight, 1.0,
                            abs_tol=1e-12):
            raise ValueError("branch weights must sum to 1")


def default_n_max(mean: float) -> int:
    return int(mean + 10.0 * math.sqrt(mean + 1.0) + 25)


def mean_photon(p: np.ndarray) -> float:
    return float(np.dot(np.arange(p.size), p))


def macro_components(alpha: float, n_max: int) -> MacroComponentPair:
    """Number distributions of D(alpha)(|0> + |1>)/sqrt(2) and D(alpha)(|0> - |1>)/sqrt(2)."""
    if alpha < 0:
        raise ValueError("alpha must be real and >= 0")
    d = displacement_operator(alpha, n_max)
    plus = (d[:, 0] + d[:, 1]) / math.sqrt(2)
    minus = (d[:, 0] - d[:, 1]) / math.sqrt(2)
    pp = np.abs(plus) ** 2
    pm = np.abs(minus) ** 2
    if pp.sum() < 1.0 - TAU_TRUNC or pm.sum() < 1.0 - TAU_TRUNC:
        raise TruncationError(f"components lose mass at n_max={n_max}")
    return MacroComponentPair(pp, pm, float(alpha))


def _l1_smoothed(p: np.ndarray, q: np.ndarray, sigma: float) -> float:
    """L1 distance between the sigma-smoothed distributions.

    sigma = 0 compares the raw distributions.  Smoothing places a Gaussian at
    every integer outcome and integrates |difference| on a grid of spacing
    GRID_SPACING (refined when sigma is below a few spacings) over the range
    mean +- 8 sigma +- 8 sqrt(mean).
    """
    if sigma == 0.0:
        size = max(p.size, q.size)
        pp = np.zeros(size); pp[:p.size] = p
        qq = np.zeros(size); qq[:q.size] = q
        return float(np.abs(pp - qq).sum())
    means = [mean_photon(p), mean_photon(q)]
    lo_mean, hi_mean = min(means), max(means)
    margin = 8.0 * sigma + 8.0 * math.sqrt(hi_mean + 1.0)
    spacing = min(GRID_SPACING, max(sigma / 6.0, 1e-4))
    x = np.arange(lo_mean - margin, hi_mean + margin + spacing, spacing)
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    dp = np.zeros_like(x)
    dq = np.zeros_like(x)
    for n in range(max(p.size, q.size)):
        g = norm * np.exp(-0.5 * ((x - n) / sigma) ** 2)
        if n < p.size and p[n] != 0.0:
            dp += p[n] * g
        if n < q.size and q[n] != 0.0:
            dq += q[n] * g
    return float(np.abs(dp - dq).sum() * spacing)


def guessing_probability(pair: MacroComponentPair, sigma: float) -> float:
    """P_g = 1/2 + (1/4) L1(smoothed p_plus, smoothed p_minus)."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    return 0.5 + 0.25 * _l1_smoothed(pair.p_plus, pair.p_minus, sigma)


def guessing_probability_dists(p: np.ndarray, q: np.ndarray, sigma: float) -> float:
    """Same figure for two arbitrary photon-number distributions."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    return 0.5 + 0.25 * _l1_smoothed(np.asarray(p, float), np.asarray(q, float), sigma)


def sigma_max(alpha: float, target_p_g: float, n_max: int | None = None,
              tol: float = 1e-3) -> float:
    """Largest sigma with P_g(sigma) >= target, by bisection on the monotone curve."""
    if n_max is None:
        n_max = default_n_max(alpha**2 + 1.0)
    pair = macro_components(alpha, n_max)
    p0 = guessing_probability(pair, 0.0)
    if not 0.5 < target_p_g < p0:
        raise UnattainableTargetError(
            f"target {target_p_g} outside (1/2, P_g(0) = {p0:.6f})"
        )
    def excess(s):
        return guessing_probability(pair, s) - target_p_g
    hi = max(2.0, 2.0 * alpha)
    while excess(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("sigma_max search did not bracket the target")
    return float(brentq(excess, 0.0, hi, xtol=tol))


def effective_size(alpha: float, target_p_g: float, n_max: int | None = None) -> int:
    """Smallest N such that |0> vs |N> stays distinguishable at sigma_max.

    Uses the same detector model and decision rule as the macro pair itself.
    """
    s_max = sigma_max(alpha, target_p_g, n_max=n_max)
    n = 1
    while True:
        p0 = np.zeros(n + 1); p0[0] = 1.0
        pn = np.zeros(n + 1); pn[n] = 1.0
        if guessing_probability_dists(p0, pn, s_max) >= target_p_g:
            return n
        n += 1
        if n > 100 * (alpha**2 + 1):
            raise RuntimeError("effective size search ran away")


def size_analysis(alpha: float, target_p_g: float = 2.0 / 3.0,
                  n_max: int | None = None) -> SizeResult:
    if n_max is None:
        n_max = default_n_max(alpha**2 + 1.0)
    pair = macro_components(alpha, n_max)
    return SizeResult(
        p_g=guessing_probability(pair, 0.0),
        sigma_max=sigma_max(alpha, target_p_g, n_max=n_max),
        n_eff=effective_size(alpha, target_p_g, n_max=n_max),
    )


def heralded_mixture_state(alpha: float, eta_h: float) -> MixtureDescription:
    """Branch weights of the heralded state: eta_h entangled, 1 - eta_h separable."""
    if not 0.0 <= eta_h <= 1.0:
        raise ValueError("eta_h must be in [0, 1]")
    return MixtureDescription(float(alpha), float(eta_h), float(1.0 - eta_h))


def lossy_mixture_guessing(alpha: float, eta_h: float, eta_abs: float,
                           sigma_grid, n_max: int | None = None) -> np.ndarray:
    """P_g(sigma) for the loss-degraded mixture components.

    Conditioned on the idler diagonal-basis outcome, the stored state is
    q D(a)|+-><+-|D^dag + (1-q) |a><a| with a = sqrt(eta_abs) alpha and
    q = eta_h * eta_abs; the two conditional states share the coherent
    background and differ only in the entangled branch.
    """
    if not 0.0 <= eta_h <= 1.0 or not 0.0 <= eta_abs <= 1.0:
        raise ValueError("eta_h and eta_abs must be in [0, 1]")
    a_mem = math.sqrt(eta_abs) * alpha
    if n_max is None:
        n_max = default_n_max(a_mem**2 + 1.0)
    q = eta_h * eta_abs
    pair = macro_components(a_mem, n_max)
    coh = np.abs(coherent_amplitudes(a_mem, n_max)) ** 2
    mix_p = q * pair.p_plus + (1.0 - q) * coh
    mix_m = q * pair.p_minus + (1.0 - q) * coh
    return np.array([
        guessing_probability_dists(mix_p, mix_m, s) for s in np.asarray(sigma_grid, float)
    ])
