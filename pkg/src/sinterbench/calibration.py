"""Radiometric-to-temperature camera calibration and propagation of uniform
calibration-parameter uncertainty.

The conversion formula is

    T = B / ln(F + R / (s - (w_refl + w_atm + w_ext))) - 273.15
    s = (raw - J0) / (J1 * tau * eps * tau_e)

with reflection/atmosphere/external-optics correction terms that vanish when
the corresponding emissivity/transmittance equals one. The published example
(raw reading 59000 at nominal constants) evaluates to 442.79; the figure that
reports it labels the axis in Kelvin, so that is the scale this module reports
by default. A true_kelvin flag re-bases the value by +273.15.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .distributions import DiracMixture, EmpiricalDistribution, quantize
from .errors import ConfigError, NumericError
from .measurement import DOMAIN_CALIBRATION, NoiseModel, substream

# Parameters the uncertainty list carries but the conversion formula never
# reads (they would feed an atmospheric-transmittance model).
UNUSED_PARAMS = ("d", "h", "t_atm_c")

# Ambient reflected temperature: the published interval centre of 0.0 is
# physically implausible (it puts exp(B/T_refl) on a singularity); the sane
# default substitutes a room-temperature value and the verbatim interval is
# available behind a flag.
T_REFL_SANE = 293.15
T_REFL_VERBATIM = 0.0


@dataclass(frozen=True)
class CalibrationParams:
    r: float = 16556.0
    b: float = 1428.0
    f: float = 1.0
    j0: float = 89.796
    j1: float = 22.5916
    epsilon: float = 1.0    # emissivity
    tau: float = 1.0        # atmospheric transmittance
    tau_e: float = 1.0      # external-optics transmittance
    t_refl: float = T_REFL_SANE
    t_atm: float = 295.0    # K
    t_e: float = 20.0       # external optics temperature
    # Carried but unused by the conversion formula:
    d: float = 16556.0
    h: float = 0.0
    t_atm_c: float = 21.85

    def __post_init__(self):
        for name in ("b", "r", "j1"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"CalibrationParams.{name} must be > 0")
        for name in ("epsilon", "tau", "tau_e"):
            v = getattr(self, name)
            if not 0 < v <= 1 + 0.05 + 1e-12:  # nominal 1.0 intervals reach 1.05
                raise ConfigError(f"CalibrationParams.{name}={v} outside (0, 1.05]")


@dataclass(frozen=True)
class CalibrationUncertainty:
    """One uniform interval per parameter, (lo, hi); defaults follow the
    published list (with the sane reflected-temperature substitution)."""

    intervals: dict = field(default_factory=dict)

    @staticmethod
    def paper_defaults(sane_t_refl: bool = True) -> "CalibrationUncertainty":
        t_refl = T_REFL_SANE if sane_t_refl else T_REFL_VERBATIM
        iv = {
            "b": (1428.0 - 0.05, 1428.0 + 0.05),
            "r": (16556.0 - 0.05, 16556.0 + 0.05),
            "f": (1.0 - 0.05, 1.0 + 0.05),
            "j1": (22.5916 - 0.00005, 22.5916 + 0.00005),
            "j0": (89.796 - 0.0005, 89.796 + 0.0005),
            "tau_e": (1.0 - 0.05, 1.0 + 0.05),
            "t_e": (20.0 - 0.05, 20.0 + 0.05),
            "tau": (1.0 - 0.05, 1.0 + 0.05),
            "epsilon": (1.0 - 0.05, 1.0 + 0.05),
            "t_refl": (t_refl - 0.05, t_refl + 0.05),
            "t_atm": (295.0 - 0.005, 295.0 + 0.005),
            # Carried but unused; the humidity interval is asymmetric as printed.
            "h": (0.0 / 100 - 0.05 / 100, 0.0 / 100 + 0.5 / 100),
            "t_atm_c": (21.85 - 0.005, 21.85 + 0.005),
            "d": (16556.0 - 0.05, 16556.0 + 0.05),
        }
        return CalibrationUncertainty(intervals=iv)

    def __post_init__(self):
        for name, (lo, hi) in self.intervals.items():
            if not lo < hi:
                raise ConfigError(f"interval for {name!r} needs lo < hi, got ({lo}, {hi})")


def _correction_terms(p: dict):
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        w_refl = (1.0 - p["epsilon"]) * p["r"] / (
            p["epsilon"] * np.exp(p["b"] / p["t_refl"]) - p["f"]
        )
        w_atm = (1.0 - p["tau"]) * p["r"] / (
            p["epsilon"] * p["tau"] * (np.exp(p["b"] / p["t_atm"]) - p["f"])
        )
        w_ext = (1.0 - p["tau_e"]) * p["r"] / (
            p["epsilon"] * p["tau"] * p["tau_e"] * (np.exp(p["b"] / p["t_e"]) - p["f"])
        )
    # An overflowing exp drives its term to zero mass, not to a failure.
    return (np.nan_to_num(w_refl, nan=np.nan, posinf=0.0, neginf=0.0),
            np.nan_to_num(w_atm, nan=np.nan, posinf=0.0, neginf=0.0),
            np.nan_to_num(w_ext, nan=np.nan, posinf=0.0, neginf=0.0))


def _params_dict(p: CalibrationParams) -> dict:
    return {k: getattr(p, k) for k in
            ("r", "b", "f", "j0", "j1", "epsilon", "tau", "tau_e",
             "t_refl", "t_atm", "t_e")}


def calibrate(raw: float, p: CalibrationParams, true_kelvin: bool = False) -> float:
    """Convert one raw ADC reading to a calibrated temperature.

    The default is the formula's literal value (the scale the published figure
    reports, 442.79 for raw=59000 at nominal constants); true_kelvin re-bases
    it by +273.15.
    """
    out = calibrate_vec(raw, _params_dict(p))
    if not np.isfinite(out):
        raise NumericError(_diagnose(raw, _params_dict(p)))
    val = float(out)
    return val + 273.15 if true_kelvin else val


def calibrate_vec(raw, p: dict):
    """Vectorized conversion; invalid parameter vectors yield NaN."""
    w_refl, w_atm, w_ext = _correction_terms(p)
    signal = (raw - p["j0"]) / (p["j1"] * p["tau"] * p["epsilon"] * p["tau_e"])
    denom = signal - (w_refl + w_atm + w_ext)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = p["f"] + p["r"] / denom
        out = np.where(arg > 0, p["b"] / np.log(np.maximum(arg, 1e-300)), np.nan)
        out = np.where(denom != 0, out, np.nan)
    return out - 273.15


def _diagnose(raw, p: dict) -> str:
    w_refl, w_atm, w_ext = _correction_terms(p)
    signal = (raw - p["j0"]) / (p["j1"] * p["tau"] * p["epsilon"] * p["tau_e"])
    denom = signal - (w_refl + w_atm + w_ext)
    if not np.all(np.isfinite(denom)):
        return "calibrate: non-finite correction bracket"
    if np.any(denom == 0):
        return f"calibrate: corrected signal is zero (signal={signal}, bracket={w_refl + w_atm + w_ext})"
    arg = p["f"] + p["r"] / denom
    return f"calibrate: log argument {arg} <= 0"


def _uncertain_param_samples(u: CalibrationUncertainty, nominal: CalibrationParams,
                             m: int, rng) -> dict:
    p = _params_dict(nominal)
    out = {k: np.full(m, v) for k, v in p.items()}
    for name, (lo, hi) in u.intervals.items():
        if name in UNUSED_PARAMS:
            continue
        out[name] = rng.uniform(lo, hi, m)
    return out


def calibrate_distribution_mc(raw: float, u: CalibrationUncertainty, m: int,
                              seed: int = 0,
                              nominal: CalibrationParams = CalibrationParams(),
                              max_invalid_frac: float = 1e-3) -> EmpiricalDistribution:
    """Joint Monte Carlo propagation of all parameter intervals."""
    rng = substream(seed, 0, DOMAIN_CALIBRATION)
    p = _uncertain_param_samples(u, nominal, m, rng)
    vals = calibrate_vec(raw, p)
    invalid = ~np.isfinite(vals)
    if invalid.mean() > max_invalid_frac:
        raise NumericError(
            f"calibration propagation: {invalid.sum()} of {m} parameter vectors "
            f"({100 * invalid.mean():.2f}%) hit a domain error"
        )
    return EmpiricalDistribution(vals[~invalid])


def calibrate_distribution_mixture(raw: float, u: CalibrationUncertainty, n: int,
                                   nominal: CalibrationParams = CalibrationParams()
                                   ) -> DiracMixture:
    """Deterministic mixture propagation: quantize each parameter to n atoms in
    turn, combine with the current particle set, and compress back to n
    particles keyed on the predicted temperature (componentwise centroids keep
    every parameter mean exact)."""
    if n < 1:
        raise ConfigError(f"mixture size must be >= 1, got {n}")
    names = [k for k in u.intervals if k not in UNUSED_PARAMS]
    particles = {k: np.array([v]) for k, v in _params_dict(nominal).items()}
    for name in names:
        lo, hi = u.intervals[name]
        atoms = quantize(NoiseModel.uniform(lo, hi), n).xs
        s = particles[name].size
        expanded = {k: np.repeat(v, atoms.size) for k, v in particles.items()}
        expanded[name] = np.tile(atoms, s)
        if s * atoms.size > n:
            key = calibrate_vec(raw, expanded)
            key = np.nan_to_num(key, nan=np.inf)
            order = np.argsort(key, kind="stable")
            groups = np.array_split(order, n)
            particles = {k: np.array([v[g].mean() for g in groups])
                         for k, v in expanded.items()}
        else:
            particles = expanded
    vals = calibrate_vec(raw, particles)
    if not np.all(np.isfinite(vals)):
        raise NumericError("calibration mixture propagation produced a domain error")
    return DiracMixture.from_points(vals, np.full(vals.size, 1.0 / vals.size))
