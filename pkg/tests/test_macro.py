import math

import numpy as np
import pytest
from scipy.special import gammaln
from scipy.stats import norm

from micromacro import macro


def test_component_distributions_closed_form():
    # p_n(+-) = e^{-lam} lam^{n-1} (sqrt(lam) +- (n - lam))^2 / (2 n!)
    alpha, n_max = 1.7, 50
    lam = alpha**2
    pair = macro.macro_components(alpha, n_max)
    n = np.arange(n_max + 1)
    base = np.exp(-lam + (n - 1) * math.log(lam) - gammaln(n + 1)) / 2.0
    p_plus = base * (math.sqrt(lam) + (n - lam)) ** 2
    p_minus = base * (math.sqrt(lam) - (n - lam)) ** 2
    assert np.max(np.abs(pair.p_plus - p_plus)) < 1e-12
    assert np.max(np.abs(pair.p_minus - p_minus)) < 1e-12


def test_ideal_guessing_probability_is_half_plus_quarter_l1():
    pair = macro.macro_components(1.2, 40)
    direct = 0.5 + 0.25 * float(np.sum(np.abs(pair.p_plus - pair.p_minus)))
    assert abs(macro.guessing_probability(pair, 0.0) - direct) < 1e-12


def test_frozen_guessing_values():
    pair2 = macro.macro_components(math.sqrt(2.0), macro.default_n_max(3.0))
    assert abs(macro.guessing_probability(pair2, 0.0) - 0.882786) < 2e-5
    pair47 = macro.macro_components(math.sqrt(47.0), macro.default_n_max(48.0))
    assert abs(macro.guessing_probability(pair47, 0.0) - 0.898236) < 2e-5


def test_two_point_masses_match_normal_cdf():
    # for delta distributions at 0 and N the optimal guess succeeds with
    # probability Phi(N / (2 sigma))
    n = 8
    p = np.zeros(n + 1)
    q = np.zeros(n + 1)
    p[0] = 1.0
    q[n] = 1.0
    for sigma in (1.0, 2.5, 6.0):
        got = macro.guessing_probability_dists(p, q, sigma)
        assert abs(got - norm.cdf(n / (2.0 * sigma))) < 1e-4


def test_guessing_probability_monotone_in_blur():
    pair = macro.macro_components(2.0, 60)
    sigmas = np.linspace(0.0, 12.0, 40)
    values = [macro.guessing_probability(pair, s) for s in sigmas]
    assert np.all(np.diff(values) <= 1e-12)
    assert values[-1] > 0.5 - 1e-12


def test_sigma_max_and_effective_size_at_47():
    result = macro.size_analysis(math.sqrt(47.0))
    assert abs(result.sigma_max - 14.908) < 5e-3
    assert result.n_eff == 13
    assert abs(result.p_g - 0.898236) < 2e-5


def test_unattainable_targets_rejected():
    with pytest.raises(macro.UnattainableTargetError):
        macro.sigma_max(math.sqrt(2.0), 0.95)
    with pytest.raises(macro.UnattainableTargetError):
        macro.sigma_max(math.sqrt(2.0), 0.5)


def test_lossy_mixture_guessing_value_and_decay():
    alpha_in = math.sqrt(47.0 / 0.55)
    values = macro.lossy_mixture_guessing(alpha_in, 0.19, 0.55, [0.0, 5.0, 15.0])
    assert abs(values[0] - 0.541616) < 1e-4
    assert values[0] > values[1] > values[2]


def test_heralded_mixture_weights():
    mix = macro.heralded_mixture_state(2.0, 0.19)
    assert mix.entangled_weight == 0.19
    assert abs(mix.entangled_weight + mix.separable_weight - 1.0) < 1e-15


def test_coarse_detector_wrapper():
    pair = macro.macro_components(1.0, 30)
    det = macro.CoarseDetector(sigma=0.8)
    assert det.guessing_probability(pair) == macro.guessing_probability(pair, 0.8)
    with pytest.raises(ValueError):
        macro.CoarseDetector(sigma=-0.1)
