"""Storage-loop model of the quantum memory.

One pass through the memory acts like a beam splitter in time: a pulse is
partly transmitted at its own time slot and partly re-emitted one storage
time later.  Composing two passes with a programmable phase on the delayed
pulse yields the three-pulse displacement train whose middle slot hosts the
back-displacement interference.  Higher-order echoes (re-absorption of the
retrieved pulse) are outside the model.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .fock import TAU_NUM


@dataclass(frozen=True)
class MemoryParams:
    """eta_abs: absorption; eta: overall storage-retrieval efficiency;
    tau_s: storage time in ns (bookkeeping only); phi: programmed phase on
    the delayed pulse."""

    eta_abs: float = 0.55
    eta: float = 0.046
    tau_s: float = 50.0
    phi: float = math.pi

    def __post_init__(self):
        if not 0.0 <= self.eta <= self.eta_abs <= 1.0:
            raise ValueError("require 0 <= eta <= eta_abs <= 1")

    @property
    def eta_t(self) -> float:
        """Transmission past the memory, 1 - eta_abs."""
        return 1.0 - self.eta_abs


@dataclass(frozen=True)
class PulseTrain:
    """Amplitudes on integer time slots (units of the storage time)."""

    pulses: tuple

    def __post_init__(self):
        merged: dict[int, complex] = {}
        for slot, amp in self.pulses:
            merged[int(slot)] = merged.get(int(slot), 0.0) + complex(amp)
        object.__setattr__(
            self, "pulses", tuple(sorted(merged.items()))
        )

    def energy(self) -> float:
        return sum(abs(a) ** 2 for _, a in self.pulses)

    def amplitude(self, slot: int) -> complex:
        for s, a in self.pulses:
            if s == slot:
                return a
        return 0.0


def memory_pass(train: PulseTrain, params: MemoryParams) -> PulseTrain:
    """One traversal: sqrt(eta_t) transmitted in place, sqrt(eta) delayed by one slot."""
    out = []
    rt = math.sqrt(params.eta_t)
    rr = math.sqrt(params.eta)
    for slot, amp in train.pulses:
        out.append((slot, rt * amp))
        out.append((slot + 1, rr * amp))
    result = PulseTrain(tuple(out))
    if result.energy() > train.energy() * (1.0 + TAU_NUM):
        raise AssertionError("memory pass created energy")
    return result


def apply_phase(train: PulseTrain, phi: float, min_slot: int = 1) -> PulseTrain:
    """Phase modulator switched on from min_slot onward (the delayed pulses)."""
    rot = cmath.exp(1j * phi)
    return PulseTrain(tuple(
        (s, a * rot if s >= min_slot else a) for s, a in train.pulses
    ))


def three_pulse_train(alpha: complex, params: MemoryParams,
                      phi: float | None = None) -> PulseTrain:
    """Two memory passes with the programmed phase on the stored component.

    Slots: (0) twice-transmitted, (1) interference of the two single-storage
    paths with amplitude sqrt(eta_t eta)(1 + e^{i phi}) alpha, (2) twice stored.
    """
    if phi is None:
        phi = params.phi
    first = memory_pass(PulseTrain(((0, alpha),)), params)
    return memory_pass(apply_phase(first, phi), params)


def back_displacement_residual(alpha: complex, phi: float,
                               params: MemoryParams) -> float:
    """Mean photon number left in the middle slot: 4 eta_t eta |alpha|^2 cos^2(phi/2)."""
    return 4.0 * params.eta_t * params.eta * abs(alpha) ** 2 * math.cos(phi / 2.0) ** 2


def mean_residual_photons(alpha: complex, sigma_phi: float,
                          params: MemoryParams) -> float:
    """back_displacement_residual averaged over phi ~ N(pi, sigma_phi^2)."""
    return 2.0 * params.eta_t * params.eta * abs(alpha) ** 2 \
        * (1.0 - math.exp(-sigma_phi**2 / 2.0))


def visibility_from_errors(delta_a: float, sigma_phi: float,
                           nodes: int = 61) -> float:
    """Interference visibility under amplitude mismatch and phase jitter.

    V = 1 - <I(pi + x)> / I(0) with I(phi) = |1 + (1 + delta_a) e^{i phi}|^2
    and x ~ N(0, sigma_phi^2): the jitter-averaged dark-port power relative
    to the bright fringe.  The average is a Gauss-Hermite quadrature.
    """
    if sigma_phi < 0:
        raise ValueError("sigma_phi must be >= 0")
    t, w = np.polynomial.hermite.hermgauss(nodes)
    x = math.sqrt(2.0) * sigma_phi * t
    r = 1.0 + delta_a
    dark = np.abs(1.0 + r * np.exp(1j * (math.pi + x))) ** 2
    mean_dark = float(np.dot(w, dark) / math.sqrt(math.pi))
    return 1.0 - mean_dark / (1.0 + r) ** 2


def sigma_for_visibility(v_target: float, delta_a: float = 0.0) -> float:
    """Phase jitter that degrades the visibility to v_target (root-find)."""
    if not 0.0 < v_target <= visibility_from_errors(delta_a, 0.0):
        raise ValueError("target visibility unreachable for this delta_a")
    if v_target == visibility_from_errors(delta_a, 0.0):
        return 0.0
    return float(brentq(
        lambda s: visibility_from_errors(delta_a, s) - v_target, 0.0, 4.0,
        xtol=1e-12,
    ))
