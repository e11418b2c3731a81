import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln
from scipy.stats import binom, poisson

from micromacro import fock


def test_coherent_state_photon_statistics():
    alpha = 1.3
    state = fock.coherent_state(alpha, 40)
    p = fock.photon_number_distribution(state)
    expected = poisson.pmf(np.arange(41), alpha**2)
    assert np.max(np.abs(p - expected)) < 1e-12


def test_coherent_state_rejects_small_cutoff():
    with pytest.raises(fock.TruncationError):
        fock.coherent_state(4.0, 12)


def test_truncated_state_rejects_norm_deficit():
    v = np.zeros(5)
    v[0] = 0.999  # squared norm 0.998, outside the tolerance band
    with pytest.raises(fock.TruncationError):
        fock.TruncatedState(v)


def test_displacement_inverse_on_low_levels():
    n_max, block = 60, 30
    prod = fock.displacement_operator(0.8, n_max) \
        @ fock.displacement_operator(-0.8, n_max)
    resid = np.abs(prod - np.eye(n_max + 1))[:block, :block]
    assert resid.max() < 1e-10


@given(st.floats(0.1, 2.2))
@settings(max_examples=40, deadline=None)
def test_displaced_photon_number_distribution(alpha):
    # |<n|D(a)|1>|^2 = e^{-a^2} a^{2(n-1)} (n - a^2)^2 / n!
    n_max = 40
    p = fock.photon_number_distribution(fock.displaced_single_photon(alpha, n_max))
    lam = alpha**2
    n = np.arange(n_max + 1)
    logw = -lam + (n - 1) * math.log(lam) - gammaln(n + 1)
    expected = np.exp(logw) * (n - lam) ** 2
    assert np.max(np.abs(p - expected)) < 1e-10


def test_beam_splitter_unitary_on_fock_space():
    u = fock.beam_splitter(0.37).fock_unitary(10)
    assert np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) < 1e-12


def test_beam_splitter_keeps_coherent_states_coherent():
    trans = 0.7
    a, b = 0.9, -0.4 + 0.3j
    n_max = 18
    state_in = fock.tensor_states(fock.coherent_state(a, n_max),
                                  fock.coherent_state(b, n_max))
    out = fock.apply_transform(fock.beam_splitter(trans), state_in)
    t, r = math.sqrt(trans), math.sqrt(1 - trans)
    expected = np.multiply.outer(
        fock.coherent_amplitudes(t * a + r * b, n_max),
        fock.coherent_amplitudes(-r * a + t * b, n_max),
    )
    assert np.max(np.abs(out.amplitudes - expected)) < 1e-8


def test_mode_transform_rejects_nonunitary():
    with pytest.raises(ValueError):
        fock.ModeTransform(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_loss_channel_damps_coherent_amplitude():
    eta = 0.42
    rho = fock.coherent_state(1.1, 25).density()
    out = fock.loss_channel(eta, rho)
    expected = fock.coherent_state(math.sqrt(eta) * 1.1, 25).density()
    assert np.max(np.abs(out.matrix - expected.matrix)) < 1e-10


def test_loss_channel_binomial_statistics():
    n, eta, n_max = 6, 0.3, 9
    v = np.zeros(n_max + 1)
    v[n] = 1.0
    out = fock.loss_channel(eta, fock.TruncatedState(v).density())
    expected = binom.pmf(np.arange(n_max + 1), n, eta)
    assert np.max(np.abs(out.diagonal() - expected)) < 1e-12


def test_loss_channel_edge_transmissions():
    rho = fock.coherent_state(0.9, 20).density()
    vac = fock.loss_channel(0.0, rho).diagonal()
    assert abs(vac[0] - 1.0) < 1e-12
    full = fock.loss_channel(1.0, rho)
    assert np.max(np.abs(full.matrix - rho.matrix)) < 1e-14


def test_click_detector_on_coherent_state():
    det = fock.ClickDetector(0.33, 0.01)
    state = fock.coherent_state(0.8, 30)
    expected = (1 - det.p_dc) * math.exp(-det.eta_d * 0.8**2)
    assert abs(fock.no_click_probability(det, state) - expected) < 1e-10
    vac = fock.coherent_state(0.0, 5)
    assert abs(fock.click_probability(det, vac) - det.p_dc) < 1e-15


def test_thermal_state_mean_and_loss():
    nbar, n_max = 0.7, 80
    rho = fock.thermal_state(nbar, n_max)
    mean = float(np.dot(np.arange(n_max + 1), rho.diagonal()))
    assert abs(mean - nbar) < 1e-10
    eta = 0.25
    cooled = fock.loss_channel(eta, rho)
    expected = fock.thermal_state(eta * nbar, n_max)
    assert np.max(np.abs(cooled.matrix - expected.matrix)) < 1e-10
