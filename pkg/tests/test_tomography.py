import numpy as np
import pytest

from micromacro import polarization as pol
from micromacro import tomography as tomo


def test_born_probabilities_normalized():
    rho = pol.werner_state(0.8)
    for pair in tomo.DEFAULT_SETTING_PAIRS:
        q = tomo.born_probabilities(rho, pair)
        assert q.shape == (2, 2)
        assert np.all(q >= -1e-15)
        assert abs(q.sum() - 1.0) < 1e-12


def test_simulated_counts_reproducible():
    rho = pol.werner_state(0.94)
    rec1 = tomo.simulate_tomography(rho, shots=500, rng_seed=11)
    rec2 = tomo.simulate_tomography(rho, shots=500, rng_seed=11)
    rec3 = tomo.simulate_tomography(rho, shots=500, rng_seed=12)
    assert np.array_equal(rec1.counts, rec2.counts)
    assert not np.array_equal(rec1.counts, rec3.counts)
    assert rec1.counts.sum() == 500 * len(tomo.DEFAULT_SETTING_PAIRS)


def test_round_trip_reconstruction():
    rho = pol.werner_state(0.94)
    record = tomo.simulate_tomography(rho, shots=20_000, rng_seed=5)
    est = tomo.reconstruct_mle(record)
    assert pol.state_fidelity(rho, est) >= 0.995
    # reconstruction respects the state constraints by construction
    assert abs(np.real(np.trace(est.matrix)) - 1.0) < 1e-10
    assert np.linalg.eigvalsh(est.matrix)[0] > -1e-10


def test_pure_state_boundary_reconstruction():
    # rank-1 target: the optimum sits on the state-set boundary and still
    # has to satisfy the optimality-residual contract
    rho = pol.bell_state()
    record = tomo.simulate_tomography(rho, shots=5_000, rng_seed=2)
    est = tomo.reconstruct_mle(record)
    assert pol.state_fidelity(rho, est) >= 0.999


def test_zero_count_pair_rejected():
    record = tomo.simulate_tomography(pol.werner_state(0.9), shots=100, rng_seed=0)
    record.counts[7] = 0
    with pytest.raises(tomo.RankDeficiencyError):
        tomo.reconstruct_mle(record)


def test_incomplete_setting_set_rejected():
    pairs = tuple(p for p in tomo.DEFAULT_SETTING_PAIRS if p[0] == "H")
    record = tomo.simulate_tomography(pol.werner_state(0.9), setting_pairs=pairs,
                                      shots=1_000, rng_seed=0)
    with pytest.raises(tomo.RankDeficiencyError):
        tomo.reconstruct_mle(record)
