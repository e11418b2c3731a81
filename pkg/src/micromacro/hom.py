"""Two-photon interference between the heralded photon and the coherent pulse.

The heralded signal enters one port of a 50/50 splitter, the coherent state
pulse (CSP) the other.  Only the CSP fraction xi in the matched spatio-
temporal mode interferes; the orthogonal remainder contributes independent
Poissonian clicks.  Visibility compares coincidences for parallel (xi as
configured) against orthogonal (xi = 0) CSP polarization:
V = (R_perp - R_par) / R_perp.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.stats import binom

from .fock import ClickDetector, beam_splitter, coherent_amplitudes


class UndefinedVisibilityError(ZeroDivisionError):
    """The orthogonal-polarization coincidence rate vanished."""


@dataclass(frozen=True)
class HomParams:
    mu_csp: float = 0.012
    p_pair: float = 0.005
    eta_h: float = 0.19
    xi: float = 1.0
    detector: ClickDetector = field(default_factory=lambda: ClickDetector(0.5, 0.0))
    n_max: int = 6
    herald_kmax: int = 4

    def __post_init__(self):
        if self.mu_csp < 0 or not 0 <= self.p_pair < 1:
            raise ValueError("bad source parameters")
        if not 0.0 <= self.eta_h <= 1.0 or not 0.0 <= self.xi <= 1.0:
            raise ValueError("eta_h and xi must be in [0, 1]")


@dataclass(frozen=True)
class TemporalProfiles:
    """CSP: Gaussian of intensity FWHM csp_fwhm (ns); heralded photon:
    double-sided exponential amplitude with coherence time tau_c (ns).

    The default FWHM of 1.0 ns is calibrated so the 3 ns-window mode overlap
    reproduces the measured visibility ratio 0.74/0.85 = 0.87 (a nominal
    2.0 ns pulse would give an overlap above 0.99 there).
    """

    csp_fwhm: float = 1.0
    hsp_tau_c: float = 1.9
    window: float = 3.0

    def __post_init__(self):
        if self.csp_fwhm <= 0 or self.hsp_tau_c <= 0 or self.window <= 0:
            raise ValueError("widths and window must be positive")


def heralded_signal_dist(p_pair: float, eta_h: float, kmax: int = 4) -> np.ndarray:
    """Photon-number distribution of the heralded signal mode.

    Pair statistics are two-mode-squeezed with tanh^2(g) = p_pair; heralding
    weights the k-pair term by the idler click probability, which in the
    low-efficiency limit is proportional to k.  The signal then suffers
    binomial loss 1 - eta_h down to the splitter.
    """
    k = np.arange(kmax + 1)
    w = k * p_pair**k
    w = w / w.sum()
    q = np.zeros(kmax + 1)
    for kk in range(kmax + 1):
        q[: kk + 1] += w[kk] * binom.pmf(np.arange(kk + 1), kk, eta_h)
    return q


def coincidence_from_joint(rho_matrix: np.ndarray, n_max: int, det: ClickDetector,
                           unmatched_mean: float = 0.0) -> float:
    """P(click on both splitter outputs) for a two-mode input density matrix.

    ``unmatched_mean`` adds an independent coherent background of that mean
    photon number split evenly over both outputs (the non-interfering CSP
    fraction); it only scales the no-click factors.
    """
    d = n_max + 1
    u = beam_splitter(0.5).fock_unitary(n_max)
    rho_out = u @ rho_matrix @ u.conj().T
    w = (1.0 - det.eta_d) ** np.arange(d)
    diag = np.real(np.diag(rho_out)).reshape(d, d)
    s_unm = math.exp(-det.eta_d * unmatched_mean / 2.0)
    one = np.ones(d)
    pnc_a = (1.0 - det.p_dc) * float(w @ diag @ one) * s_unm
    pnc_b = (1.0 - det.p_dc) * float(one @ diag @ w) * s_unm
    pnc_ab = (1.0 - det.p_dc) ** 2 * float(w @ diag @ w) * s_unm**2
    return 1.0 - pnc_a - pnc_b + pnc_ab


def coincidence_probability(params: HomParams, xi: float | None = None) -> float:
    """Coincidence rate with the CSP mode-matched fraction xi."""
    if xi is None:
        xi = params.xi
    d = params.n_max + 1
    qh = np.zeros(d)
    src = heralded_signal_dist(params.p_pair, params.eta_h, params.herald_kmax)
    qh[: min(d, src.size)] = src[: min(d, src.size)]
    vc = coherent_amplitudes(math.sqrt(xi * params.mu_csp), params.n_max)
    rho_in = np.kron(np.diag(qh.astype(complex)), np.outer(vc, vc.conj()))
    return coincidence_from_joint(
        rho_in, params.n_max, params.detector,
        unmatched_mean=(1.0 - xi) * params.mu_csp,
    )


def hom_visibility(params: HomParams) -> float:
    """V = (R_perp - R_par) / R_perp."""
    r_par = coincidence_probability(params)
    r_perp = coincidence_probability(params, xi=0.0)
    # below ~100 eps the subtractions above are pure cancellation noise
    if r_perp <= 1e-14:
        raise UndefinedVisibilityError("no coincidences in the orthogonal case")
    return (r_perp - r_par) / r_perp


def hom_visibility_curve(mu_grid, params: HomParams) -> np.ndarray:
    from dataclasses import replace
    return np.array([
        hom_visibility(replace(params, mu_csp=float(m))) for m in mu_grid
    ])


def classical_reference_visibility(mu_signal: float, mu_csp: float,
                                   det: ClickDetector, n_phase: int = 64) -> float:
    """Visibility when the heralded photon is replaced by a weak coherent state.

    The relative phase is uniformly random; coherent inputs stay coherent, so
    each phase sample factorizes into independent click probabilities.  The
    weak-field limit approaches the classical bound of 1/2.
    """
    a = math.sqrt(mu_signal)
    b = math.sqrt(mu_csp)
    phases = 2.0 * math.pi * np.arange(n_phase) / n_phase
    coinc = 0.0
    for ph in phases:
        o1 = (a + b * np.exp(1j * ph)) / math.sqrt(2)
        o2 = (-a + b * np.exp(1j * ph)) / math.sqrt(2)
        p1 = 1.0 - (1.0 - det.p_dc) * math.exp(-det.eta_d * abs(o1) ** 2)
        p2 = 1.0 - (1.0 - det.p_dc) * math.exp(-det.eta_d * abs(o2) ** 2)
        coinc += p1 * p2
    r_par = coinc / n_phase
    p1 = 1.0 - (1.0 - det.p_dc) * math.exp(-det.eta_d * (mu_signal + mu_csp) / 2.0)
    r_perp = p1 * p1
    if r_perp == 0.0:
        raise UndefinedVisibilityError("no coincidences in the orthogonal case")
    return (r_perp - r_par) / r_perp


def overlap_ratio(v_m: float, v_e: float) -> float:
    """Measured-to-expected visibility ratio, the mode-overlap estimate."""
    if not 0.0 < v_m <= v_e <= 1.0:
        raise ValueError(f"require 0 < v_m <= v_e <= 1, got ({v_m}, {v_e})")
    return v_m / v_e


def temporal_overlap(profiles: TemporalProfiles, window: float | None = None) -> float:
    """Squared normalized overlap of the window-restricted amplitude profiles."""
    if window is None:
        window = profiles.window
    s = profiles.csp_fwhm / (2.0 * math.sqrt(math.log(2.0)))
    tau = profiles.hsp_tau_c
    g = lambda t: np.exp(-t**2 / (2.0 * s**2))
    h = lambda t: np.exp(-abs(t) / tau)
    half = window / 2.0
    num = quad(lambda t: g(t) * h(t), -half, half)[0] ** 2
    den = quad(lambda t: g(t) ** 2, -half, half)[0] \
        * quad(lambda t: h(t) ** 2, -half, half)[0]
    return num / den


def overlap_vs_window(profiles: TemporalProfiles, windows, v_e: float = 0.85):
    """xi(w) and the predicted measured visibility V_m(w) = xi(w) * v_e."""
    xi = np.array([temporal_overlap(profiles, float(w)) for w in windows])
    return xi, xi * v_e
