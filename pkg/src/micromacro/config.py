"""Run configuration: plain text, one ``section.key = value`` per line.

``#`` starts a comment, blank lines are ignored, and any key outside the
schema is rejected.  Defaults reproduce the reference experiment, so an empty
config is a valid complete run.  The resolved key/value map has a canonical
text form whose SHA-256 is stamped into every output table.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .noise import ExperimentParams
from .spdc import DetailedParams


class ConfigError(ValueError):
    pass


def _float(s: str) -> float:
    return float(s)


def _int(s: str) -> int:
    return int(s)


def _reading(s: str) -> str:
    if s not in ("per_mode", "projected"):
        raise ValueError(f"bad g_reading {s!r}")
    return s


_NOISE_KEYS = ("eta_h", "bs_t", "eta", "vis", "v_mm", "eta_abs", "r_overlap",
               "kappa", "sd_eta_h", "sd_eta", "sd_vis")
_DETAILED_KEYS = ("g", "r", "eta_d", "p_dc", "t1", "t2", "eta_c", "gamma",
                  "sigma_phi")

SCHEMA: dict[str, tuple] = {
    "run.seed": (_int, 0),
    "curves.alpha_sq_min": (_float, 0.0),
    "curves.alpha_sq_max": (_float, 100.0),
    "curves.points": (_int, 41),
    "curves.band_samples": (_int, 200),
    "size.beta_sq_min": (_float, 2.0),
    "size.beta_sq_max": (_float, 60.0),
    "size.points": (_int, 15),
    "size.beta_sq_star": (_float, 47.0),
    "size.target_p_g": (_float, 2.0 / 3.0),
    "hom.p_pair": (_float, 0.005),
    "hom.eta_h": (_float, 0.19),
    "hom.xi": (_float, 1.0),
    "hom.eta_d": (_float, 0.5),
    "hom.p_dc": (_float, 0.0),
    "hom.mu_star": (_float, 0.012),
    "hom.mu_min": (_float, 0.001),
    "hom.mu_max": (_float, 0.2),
    "hom.points": (_int, 25),
    "hom.csp_fwhm": (_float, 1.0),
    "hom.hsp_tau_c": (_float, 1.9),
    "hom.window_min": (_float, 0.5),
    "hom.window_max": (_float, 6.0),
    "hom.window_points": (_int, 23),
    "detailed.g_reading": (_reading, "per_mode"),
    "detailed.mc_samples": (_int, 0),
    "tomo.shots": (_int, 100_000),
    "tomo.werner_w": (_float, 0.94),
}
for _k in _NOISE_KEYS:
    SCHEMA[f"noise.{_k}"] = (_float, getattr(ExperimentParams(), _k))
for _k in _DETAILED_KEYS:
    SCHEMA[f"detailed.{_k}"] = (_float, getattr(DetailedParams(), _k))


def parse_config_text(text: str) -> dict:
    values = {k: default for k, (_, default) in SCHEMA.items()}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key or not val:
            raise ConfigError(f"line {lineno}: expected 'section.key = value'")
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        caster = SCHEMA[key][0]
        try:
            values[key] = caster(val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value {val!r} for {key}") from exc
    return values


@dataclass(frozen=True)
class RunConfig:
    values: tuple

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        return cls(tuple(sorted(parse_config_text(text).items())))

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    @classmethod
    def defaults(cls) -> "RunConfig":
        return cls.from_text("")

    def __getitem__(self, key: str):
        d = dict(self.values)
        if key not in d:
            raise KeyError(key)
        return d[key]

    def canonical_text(self) -> str:
        return "\n".join(f"{k} = {v!r}" for k, v in self.values) + "\n"

    def sha256(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()

    def noise_params(self) -> ExperimentParams:
        return ExperimentParams(**{k: self[f"noise.{k}"] for k in _NOISE_KEYS})

    def detailed_params(self) -> DetailedParams:
        kw = {k: self[f"detailed.{k}"] for k in _DETAILED_KEYS}
        kw["g_reading"] = self["detailed.g_reading"]
        return DetailedParams(**kw)
