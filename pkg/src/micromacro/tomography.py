"""Tomography simulation and maximum-likelihood reconstruction.

The default scheme measures 6 analyzer states per side (H, V, D, A, R, L),
i.e. 36 setting pairs with four +-1 x +-1 outcomes each — an overcomplete,
informationally complete set for two qubits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .polarization import TwoQubitDensity

_S2 = 1 / np.sqrt(2)
ANALYZER_KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "D": np.array([_S2, _S2], dtype=complex),
    "A": np.array([_S2, -_S2], dtype=complex),
    "R": np.array([_S2, 1j * _S2], dtype=complex),
    "L": np.array([_S2, -1j * _S2], dtype=complex),
}

DEFAULT_SETTING_PAIRS = tuple(
    (a, b) for a in "HVDARL" for b in "HVDARL"
)


class RankDeficiencyError(ValueError):
    """The record does not determine the state (under-complete settings)."""


class ConvergenceError(RuntimeError):
    """Likelihood ascent hit the iteration cap before reaching the gradient target."""


@dataclass(frozen=True)
class TomographyRecord:
    """Counts for each setting pair.

    ``counts[k]`` is a 2x2 array for setting pair ``pairs[k]``, indexed by
    (outcome on side A, outcome on side B) with 0 = +1 (projection onto the
    analyzer ket) and 1 = -1 (orthogonal port).
    """

    pairs: tuple
    counts: np.ndarray
    shots_per_pair: int

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.shape != (len(self.pairs), 2, 2):
            raise ValueError("counts must have shape (n_pairs, 2, 2)")
        if np.any(c < 0):
            raise ValueError("counts must be nonnegative")
        if np.any(c.sum(axis=(1, 2)) != self.shots_per_pair):
            raise ValueError("each pair's counts must sum to shots_per_pair")
        object.__setattr__(self, "counts", c)


def _pair_projectors(pair) -> list[np.ndarray]:
    """Four outcome projectors for one setting pair, (+,+), (+,-), (-,+), (-,-)."""
    out = []
    for ka in _outcome_projectors(pair[0]):
        for kb in _outcome_projectors(pair[1]):
            out.append(np.kron(ka, kb))
    return out


def _outcome_projectors(label: str):
    ket = ANALYZER_KETS[label]
    p = np.outer(ket, ket.conj())
    return p, np.eye(2) - p


def born_probabilities(rho: TwoQubitDensity, pair) -> np.ndarray:
    """2x2 outcome probabilities for one setting pair."""
    q = np.array([np.real(np.trace(rho.matrix @ pi)) for pi in _pair_projectors(pair)])
    q = np.clip(q, 0.0, None)
    return (q / q.sum()).reshape(2, 2)


def simulate_tomography(rho: TwoQubitDensity, setting_pairs=DEFAULT_SETTING_PAIRS,
                        shots: int = 10_000, rng_seed: int = 0) -> TomographyRecord:
    """Multinomial outcome counts per setting pair, reproducible for a seed.

    Each pair draws from its own generator spawned off the master seed, so
    results do not depend on evaluation order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    streams = np.random.SeedSequence(rng_seed).spawn(len(setting_pairs))
    counts = np.empty((len(setting_pairs), 2, 2), dtype=np.int64)
    for k, (pair, ss) in enumerate(zip(setting_pairs, streams)):
        q = born_probabilities(rho, pair).reshape(-1)
        rng = np.random.default_rng(ss)
        counts[k] = rng.multinomial(shots, q).reshape(2, 2)
    return TomographyRecord(tuple(setting_pairs), counts, shots)


def _lower_triangular(x: np.ndarray) -> np.ndarray:
    """Map 16 real parameters to a 4x4 lower-triangular complex factor."""
    t = np.zeros((4, 4), dtype=complex)
    t[np.diag_indices(4)] = x[:4]
    lo = np.tril_indices(4, -1)
    t[lo] = x[4:10] + 1j * x[10:16]
    return t


def _pack(t: np.ndarray) -> np.ndarray:
    lo = np.tril_indices(4, -1)
    return np.concatenate([np.real(np.diag(t)), np.real(t[lo]), np.imag(t[lo])])


def reconstruct_mle(record: TomographyRecord, max_iter: int = 4000,
                    grad_tol: float = 1e-9) -> TwoQubitDensity:
    """Maximum-likelihood state estimate, constrained PSD/unit-trace.

    The state is parameterized as rho = T T^dag / tr(T T^dag) with T lower
    triangular, so the constraints hold by construction.  Convergence is
    certified by the optimality residual max(lambda_max(R) - 1, sup|R rho -
    rho|) with R = sum_k (c_k / q_k) Pi_k / N, which upper-bounds the
    per-shot log-likelihood gap to the maximum; failing to bring it below
    ``grad_tol`` raises ConvergenceError.
    """
    if np.any(record.counts.sum(axis=(1, 2)) == 0):
        raise RankDeficiencyError("a setting pair has no counts at all")
    projectors = []
    for pair in record.pairs:
        projectors.extend(_pair_projectors(pair))
    pis = np.stack(projectors)                      # (4*n_pairs, 4, 4)
    freqs = record.counts.reshape(-1).astype(float)
    n_total = freqs.sum()

    # informational completeness: the projectors must span all 16 operator dims
    span = pis.reshape(len(pis), 16)
    if np.linalg.matrix_rank(span, tol=1e-9) < 16:
        raise RankDeficiencyError(
            f"projector set spans {np.linalg.matrix_rank(span, tol=1e-9)} < 16 dims"
        )

    # linear-inversion warm start, projected onto the state set
    rho_lin, *_ = np.linalg.lstsq(span, freqs / record.shots_per_pair, rcond=None)
    rho_lin = rho_lin.reshape(4, 4)
    rho_lin = (rho_lin + rho_lin.conj().T) / 2
    w, v = np.linalg.eigh(rho_lin)
    w = np.clip(w, 0.0, None)
    rho0 = (v * w) @ v.conj().T
    rho0 = rho0 / np.trace(rho0) + 1e-12 * np.eye(4)
    t0 = np.linalg.cholesky(rho0)

    def neg_ll_and_grad(x):
        t = _lower_triangular(x)
        m = t @ t.conj().T
        trm = np.real(np.trace(m))
        rho = m / trm
        q = np.clip(np.real(np.einsum("kij,ji->k", pis, rho)), 1e-300, None)
        ll = float(freqs @ np.log(q))
        r_op = np.einsum("k,kij->ij", freqs / q, pis)
        grad_m = (r_op - n_total * np.eye(4)) / trm
        grad_t = 2.0 * grad_m @ t          # d/dT* of LL, doubled for real params
        g = -_pack(np.tril(grad_t)) / n_total
        return -ll / n_total, g

    res = minimize(neg_ll_and_grad, _pack(t0), jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "gtol": 1e-13, "ftol": 1e-16})
    t = _lower_triangular(res.x)
    m = t @ t.conj().T
    rho = m / np.real(np.trace(m))

    def r_operator(rho):
        q = np.clip(np.real(np.einsum("kij,ji->k", pis, rho)), 1e-300, None)
        return np.einsum("k,kij->ij", freqs / q, pis) / n_total

    def residual(rho, r_op):
        # measuring the T-space gradient instead would drown in cancellation
        # noise near a rank-deficient optimum; this bound does not
        lam = float(np.linalg.eigvalsh((r_op + r_op.conj().T) / 2)[-1])
        return max(lam - 1.0, float(np.max(np.abs(r_op @ rho - rho))))

    # L-BFGS-B stops once likelihood changes fall below float resolution,
    # which can leave the residual above the contract.  The multiplicative
    # fixed-point update rho <- R rho R / tr keeps ascending without needing
    # to resolve those changes, so use it to polish.
    r_op = r_operator(rho)
    gnorm = residual(rho, r_op)
    if gnorm > grad_tol:
        for it in range(20_000):
            rho = r_op @ rho @ r_op
            rho = (rho + rho.conj().T) / 2
            rho = rho / np.real(np.trace(rho))
            r_op = r_operator(rho)
            if it % 25 == 24:
                gnorm = residual(rho, r_op)
                if gnorm <= grad_tol:
                    break
    if gnorm > grad_tol:
        raise ConvergenceError(
            f"optimality residual {gnorm:.3g} > {grad_tol} "
            f"(optimizer status: {res.message})"
        )
    w, v = np.linalg.eigh(rho)
    rho = (v * np.clip(w, 0.0, None)) @ v.conj().T
    rho = (rho + rho.conj().T) / 2
    return TwoQubitDensity(rho / np.real(np.trace(rho)))
