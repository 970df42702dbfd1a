"""Single-pass uncertainty-tracked closed loop.

The joint controller/plant state (spot temperature, integral, previous error)
is a set of N equally weighted particles propagated deterministically. Each
control step:

  1. the noise model is discretized to K = N equiprobable quantile atoms,
     rescaled about their mean so the atom variance equals the model variance
     exactly (plain midpoint quantiles systematically under-disperse the
     injected noise, which compounds over 200 steps);
  2. the N x K product of state particles and noise atoms is pushed through
     measure -> error -> PID -> plant, all elementwise;
  3. the error and power marginals of the product set are emitted as Dirac
     mixtures (N*K points, uniform weights);
  4. the product is compressed back to N particles: sort by spot temperature,
     split into N consecutive groups of K, replace each group by its
     componentwise centroid.

The compression key is the spot temperature, not the current error: the error
is dominated by the fresh noise atom, so grouping on it collapses almost all
state variance (the retained fraction is roughly var_state / var_error per
step). Grouping on the state component preserves the propagated spread while
keeping every first moment exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DiracMixture, quantize
from .errors import BudgetError, ConfigError
from .measurement import NoiseModel
from .pid import ControlConfig, PidGains
from .thermal import LumpedParams

DEFAULT_EXPANSION_BUDGET = 1 << 20


@dataclass
class DistResult:
    error_mixtures: list[DiracMixture]  # one per control iteration
    power_mixtures: list[DiracMixture]
    e_ss: DiracMixture                  # final-iteration error marginal


def lift_through(f, m: DiracMixture) -> DiracMixture:
    """Pointwise map of the support; weights unchanged, result re-sorted."""
    vals = np.asarray(f(m.xs), dtype=float)
    return DiracMixture.from_points(vals, m.ws)


def noise_atoms(noise: NoiseModel, n: int) -> np.ndarray:
    """Variance-matched quantile atoms used for the product combination."""
    atoms = quantize(noise, n).xs.copy()
    if atoms.size > 1 and noise.variance > 0:
        mu = atoms.mean()
        v = ((atoms - mu) ** 2).mean()
        if v > 0:
            atoms = mu + (atoms - mu) * np.sqrt(noise.variance / v)
    return atoms


def run_distributional(cfg: ControlConfig, gains: PidGains, plant: LumpedParams,
                       noise: NoiseModel, n_rep: int,
                       expansion_budget: int = DEFAULT_EXPANSION_BUDGET) -> DistResult:
    """Deterministic one-run propagation at representation size n_rep."""
    if n_rep < 1:
        raise ConfigError(f"representation size must be >= 1, got {n_rep}")
    atoms = noise_atoms(noise, n_rep)
    k = atoms.size  # 1 for the 'none' model, else n_rep
    if n_rep * k > expansion_budget:
        raise BudgetError(
            f"product expansion {n_rep}x{k} exceeds the budget of {expansion_budget}"
        )
    s = n_rep
    T = np.full(s, cfg.initial_temp)
    I = np.zeros(s)
    prev = np.zeros(s)
    initialized = False
    dt = cfg.dt
    w_prod = np.full(s * k, 1.0 / (s * k))

    error_mixtures: list[DiracMixture] = []
    power_mixtures: list[DiracMixture] = []
    for _ in range(cfg.n_iters):
        Tx = np.repeat(T, k)
        Ix = np.repeat(I, k)
        px = np.repeat(prev, k)
        eps = np.tile(atoms, s)
        e = cfg.setpoint - (Tx + eps)
        d = (e - px) / dt if initialized else np.zeros_like(e)
        raw = gains.kp * e + gains.ki * Ix + gains.kd * d
        P = np.clip(raw, cfg.p_min, cfg.p_max)
        windup = ((raw > cfg.p_max) & (e > 0)) | ((raw < cfg.p_min) & (e < 0))
        Ix = np.where(windup, Ix, Ix + e * dt)
        Tx = Tx + (dt / plant.c_eff) * (
            plant.absorptivity * P - plant.h_loss * (Tx - plant.t_amb)
        )
        initialized = True

        error_mixtures.append(DiracMixture.from_points(e, w_prod))
        power_mixtures.append(DiracMixture.from_points(P, w_prod))

        # Compress jointly: sort on spot temperature, equal groups of k,
        # componentwise centroids (every first moment stays exact).
        order = np.argsort(Tx, kind="stable")
        T = Tx[order].reshape(s, k).mean(axis=1)
        I = Ix[order].reshape(s, k).mean(axis=1)
        prev = e[order].reshape(s, k).mean(axis=1)

    return DistResult(
        error_mixtures=error_mixtures,
        power_mixtures=power_mixtures,
        e_ss=error_mixtures[-1],
    )
