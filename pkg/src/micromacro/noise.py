"""Simple noise model: back-displacement noise fraction and witness curves.

An imperfect back-displacement leaves residual light in the memory output
mode; the state is approximated as a Werner state whose visibility is the
product of the displacement-free entanglement visibility and (1 - noise
fraction).  All click/leak probabilities below have closed forms that tests
verify against the defining Poisson series to 1e-12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class ExperimentParams:
    """Independently measured parameters (mean and optional std for bands).

    eta_h      heralding efficiency of the signal photon
    bs_t       transmittance of the displacement beam splitter
    eta        memory storage-retrieval efficiency
    vis        back-displacement interference visibility
    v_mm       entanglement visibility without displacement
    eta_abs    memory absorption probability
    r_overlap  mode-overlap ratio from the two-photon interference measurement
    kappa      mapping mu = kappa * |alpha|^2 from displacement size to the
               mean photon number used by the noise formulas
    """

    eta_h: float = 0.19
    bs_t: float = 0.995
    eta: float = 0.046
    vis: float = 0.9985
    v_mm: float = 0.94
    eta_abs: float = 0.55
    r_overlap: float = 0.87
    kappa: float = 1.0
    sd_eta_h: float = 0.02
    sd_eta: float = 0.002
    sd_vis: float = 0.0002

    def __post_init__(self):
        for name in ("eta_h", "bs_t", "eta", "vis", "v_mm", "eta_abs", "r_overlap"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")
        if self.kappa <= 0:
            raise ValueError("kappa must be > 0")


DEFAULT_PARAMS = ExperimentParams()


@dataclass(frozen=True)
class WitnessCurve:
    """Predicted witnesses on an |alpha|^2 grid, with one-sigma band half-widths."""

    alpha_sq: np.ndarray
    excitations: np.ndarray
    s: np.ndarray
    ppt: np.ndarray
    concurrence: np.ndarray
    band_s: np.ndarray
    band_ppt: np.ndarray
    band_concurrence: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.alpha_sq) <= 0):
            raise ValueError("alpha_sq grid must be strictly increasing")
        for b in (self.band_s, self.band_ppt, self.band_concurrence):
            if np.any(b < 0):
                raise ValueError("band half-widths must be >= 0")


def noise_click_prob(mu: float, eta: float, vis: float) -> float:
    """Probability that residual back-displacement light produces a click.

    Closed form of the Poisson sum over >= 1 displacement photons each
    leaking with probability 2 eta (1 - vis).
    """
    if mu < 0:
        raise ValueError("mu must be >= 0")
    return 1.0 - math.exp(-2.0 * mu * eta * (1.0 - vis))


def no_leak_prob(mu: float, eta: float, vis: float) -> float:
    """Probability that at least one photon arrived and none leaked.

    The defining sum starts at one photon, so the Poisson vacuum term is
    excluded: exp(-2 mu eta (1-vis)) - exp(-mu).  Zero at mu = 0.
    """
    if mu < 0:
        raise ValueError("mu must be >= 0")
    return math.exp(-2.0 * mu * eta * (1.0 - vis)) - math.exp(-mu)


def signal_prob(params: ExperimentParams, pbar_n: float) -> float:
    """p_s = eta_h * bs_t * eta * pbar_n."""
    return params.eta_h * params.bs_t * params.eta * pbar_n


def noise_fraction(mu: float, params: ExperimentParams = DEFAULT_PARAMS) -> float:
    """Noise weight of the Werner state, p_n / (p_s + p_n)."""
    p_n = noise_click_prob(mu, params.eta, params.vis)
    p_s = signal_prob(params, no_leak_prob(mu, params.eta, params.vis))
    denom = p_s + p_n
    if denom == 0.0:
        raise ValueError("p_s + p_n = 0: noise fraction undefined at this input")
    return p_n / denom


def predict_werner_visibility(alpha_sq: float,
                              params: ExperimentParams = DEFAULT_PARAMS) -> float:
    """W = v_mm * (1 - noise_fraction(kappa * alpha_sq)).

    A zero-size displacement is no operation at all and contributes no noise,
    so alpha_sq = 0 maps to W = v_mm exactly (the noise formulas themselves
    condition on at least one displacement photon and are undefined there).
    """
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    if alpha_sq == 0.0:
        return params.v_mm
    return params.v_mm * (1.0 - noise_fraction(params.kappa * alpha_sq, params))


def excitations_from_alpha(alpha_sq: float, eta_abs: float) -> float:
    """Mean atomic-excitation count for a displacement of size alpha_sq.

    The quoted alpha_sq values are already overlap-corrected upstream, so
    only the absorption probability enters here.
    """
    if alpha_sq < 0:
        raise ValueError("alpha_sq must be >= 0")
    return eta_abs * alpha_sq


def s_from_visibility(w: float) -> float:
    return 2.0 * math.sqrt(2.0) * w


def ppt_from_visibility(w: float) -> float:
    return (1.0 - 3.0 * w) / 4.0


def concurrence_from_visibility(w: float) -> float:
    return max(0.0, (3.0 * w - 1.0) / 2.0)


def _sample_params(params: ExperimentParams, rng: np.random.Generator) -> ExperimentParams:
    draw = {
        "eta_h": rng.normal(params.eta_h, params.sd_eta_h),
        "eta": rng.normal(params.eta, params.sd_eta),
        "vis": rng.normal(params.vis, params.sd_vis),
    }
    draw["eta_h"] = float(np.clip(draw["eta_h"], 0.0, 1.0))
    draw["eta"] = float(np.clip(draw["eta"], 0.0, 1.0))
    draw["vis"] = float(np.clip(draw["vis"], 0.0, 1.0))
    return replace(params, **draw)


def witness_band_point(alpha_sq: float, params: ExperimentParams,
                       band_samples: int, rng_seed: int,
                       index: int) -> tuple[float, float, float]:
    """One-sigma witness spreads at a single grid point.

    The generator is seeded from (rng_seed, index), so the result does not
    depend on evaluation order or on how points are split across workers.
    """
    rng = np.random.default_rng(np.random.SeedSequence([rng_seed, index]))
    ws = np.array([
        predict_werner_visibility(alpha_sq, _sample_params(params, rng))
        for _ in range(band_samples)
    ])
    return (
        float(np.std(2.0 * math.sqrt(2.0) * ws)),
        float(np.std((1.0 - 3.0 * ws) / 4.0)),
        float(np.std(np.maximum(0.0, (3.0 * ws - 1.0) / 2.0))),
    )


def predict_witness_curves(alpha_sq_grid, params: ExperimentParams = DEFAULT_PARAMS,
                           band_samples: int = 200, rng_seed: int = 0) -> WitnessCurve:
    """Predicted S / PPT / concurrence over a displacement-size grid.

    Band half-widths are one standard deviation of each witness under
    Gaussian draws of the uncertain parameters (eta_h, eta, vis).  Every grid
    point derives its own seed from (rng_seed, point index), so results are
    independent of evaluation order and worker count.
    """
    grid = np.asarray(alpha_sq_grid, dtype=float)
    if grid.size == 0:
        raise ValueError("alpha_sq grid is empty")
    w = np.array([predict_werner_visibility(a, params) for a in grid])
    s = 2.0 * math.sqrt(2.0) * w
    ppt = (1.0 - 3.0 * w) / 4.0
    conc = np.maximum(0.0, (3.0 * w - 1.0) / 2.0)

    band_s = np.zeros_like(grid)
    band_ppt = np.zeros_like(grid)
    band_conc = np.zeros_like(grid)
    if band_samples > 0:
        for i, a in enumerate(grid):
            band_s[i], band_ppt[i], band_conc[i] = witness_band_point(
                a, params, band_samples, rng_seed, i
            )

    return WitnessCurve(
        alpha_sq=grid,
        excitations=params.eta_abs * grid,
        s=s, ppt=ppt, concurrence=conc,
        band_s=band_s, band_ppt=band_ppt, band_concurrence=band_conc,
    )
