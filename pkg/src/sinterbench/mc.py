"""Monte Carlo ensemble propagation of measurement uncertainty through the
closed loop, including ground-truth generation.

Paths are embarrassingly parallel: path i draws its noise from substream
(seed, i), blocks of paths are propagated as vectorized numpy arrays, and
per-iteration statistics are accumulated by streaming raw-moment sums so that
million-path runs never retain the full m x n_iters history. Full sample
vectors are kept only at the requested record iterations (the final iteration
is always recorded).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distributions import (EmpiricalDistribution, SummaryStats, moments_from_sums,
                            raw_moment_sums, stats, weighted_percentile,
                            _histogram_mode)
from .errors import BudgetError, ConfigError
from .measurement import DOMAIN_GROUND_TRUTH, DOMAIN_SIM, NoiseModel, sample, substream
from .pid import ControlConfig, PidGains
from .thermal import LumpedParams

_BLOCK = 8192
# Per-iteration subsample retained for mode/CI estimation (moments are exact
# via streaming sums; mode and percentiles come from the first paths).
_SUBSAMPLE = 8192


@dataclass(frozen=True)
class McConfig:
    paths: int
    noise: NoiseModel
    seed: int
    n_iters: int = 200
    record_iters: tuple[int, ...] = ()
    memory_budget_mb: float = 512.0
    path_offset: int = 0  # shifts the substream domain (fresh draws per repetition)

    def __post_init__(self):
        if self.paths < 1:
            raise ConfigError(f"paths must be >= 1, got {self.paths}")
        bad = [i for i in self.record_iters if not 1 <= i <= self.n_iters]
        if bad:
            raise ConfigError(f"record_iters {bad} outside [1, {self.n_iters}]")


@dataclass
class EnsembleResult:
    error_stats: list[SummaryStats]
    power_stats: list[SummaryStats]
    retained: dict[int, np.ndarray]  # iteration -> error samples at that iteration
    e_ss: EmpiricalDistribution     # final-iteration errors, m samples


def _noise_block(noise: NoiseModel, seed: int, first_path: int, n_paths: int,
                 n_iters: int, domain: int) -> np.ndarray:
    out = np.empty((n_paths, n_iters))
    for i in range(n_paths):
        rng = substream(seed, first_path + i, domain)
        out[i, :] = sample(noise, rng, n_iters)
    return out


def _propagate_block(eps: np.ndarray, cfg: ControlConfig, gains: PidGains,
                     plant: LumpedParams):
    """Vectorized closed loop for one block; returns (errors, powers) of shape
    (n_iters, n_paths)."""
    m, n = eps.shape
    T = np.full(m, cfg.initial_temp)
    I = np.zeros(m)
    prev = np.zeros(m)
    initialized = False
    errors = np.empty((n, m))
    powers = np.empty((n, m))
    dt = cfg.dt
    for t in range(n):
        e = cfg.setpoint - (T + eps[:, t])
        d = (e - prev) / dt if initialized else np.zeros(m)
        raw = gains.kp * e + gains.ki * I + gains.kd * d
        P = np.clip(raw, cfg.p_min, cfg.p_max)
        windup = ((raw > cfg.p_max) & (e > 0)) | ((raw < cfg.p_min) & (e < 0))
        I = np.where(windup, I, I + e * dt)
        prev = e
        initialized = True
        T = T + (dt / plant.c_eff) * (
            plant.absorptivity * P - plant.h_loss * (T - plant.t_amb)
        )
        errors[t] = e
        powers[t] = P
    return errors, powers


def run_path(cfg: ControlConfig, gains: PidGains, plant: LumpedParams,
             noise: NoiseModel, rng) -> tuple[np.ndarray, np.ndarray]:
    """One closed-loop rollout on an already-derived substream."""
    eps = np.asarray(sample(noise, rng, cfg.n_iters), dtype=float).reshape(1, -1)
    errors, powers = _propagate_block(eps, cfg, gains, plant)
    return errors[:, 0], powers[:, 0]


def _worker_count() -> int:
    env = os.environ.get("SINTERBENCH_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


class _StreamingStats:
    """Per-iteration raw-moment accumulator plus a deterministic subsample."""

    def __init__(self, n_iters: int):
        self.sums = np.zeros((n_iters, 5))  # n, s1..s4
        self.sub: list[np.ndarray] = []
        self.sub_count = 0

    def add(self, block: np.ndarray):  # block: (n_iters, n_paths)
        n = block.shape[1]
        self.sums[:, 0] += n
        self.sums[:, 1] += block.sum(axis=1)
        self.sums[:, 2] += (block**2).sum(axis=1)
        self.sums[:, 3] += (block**3).sum(axis=1)
        self.sums[:, 4] += (block**4).sum(axis=1)
        if self.sub_count < _SUBSAMPLE:
            take = min(n, _SUBSAMPLE - self.sub_count)
            self.sub.append(block[:, :take].copy())
            self.sub_count += take

    def summarize(self) -> list[SummaryStats]:
        sub = np.concatenate(self.sub, axis=1)
        out = []
        for t in range(self.sums.shape[0]):
            n, s1, s2, s3, s4 = (float(v) for v in self.sums[t])
            mean, std, skew, kurt = moments_from_sums(n, s1, s2, s3, s4, sample_std=True)
            xs = np.sort(sub[t])
            ws = np.full(xs.size, 1.0 / xs.size)
            out.append(SummaryStats(
                mean=mean, std=std, skewness=skew, kurtosis=kurt,
                mode=_histogram_mode(xs, ws),
                ci_lo=weighted_percentile(xs, ws, 2.5),
                ci_hi=weighted_percentile(xs, ws, 97.5),
                moments_defined=std > 0,
            ))
        return out


def run_ensemble(mc: McConfig, cfg: ControlConfig, gains: PidGains,
                 plant: LumpedParams, domain: int = DOMAIN_SIM) -> EnsembleResult:
    """Propagate m independent paths; streaming moments, selective retention."""
    record = sorted(set(mc.record_iters) | {cfg.n_iters})
    budget_bytes = mc.memory_budget_mb * 1e6
    need = len(record) * mc.paths * 8
    if need > budget_bytes:
        raise BudgetError(
            f"retaining {len(record)} iterations x {mc.paths} paths needs "
            f"{need / 1e6:.0f} MB, over the {mc.memory_budget_mb:.0f} MB budget"
        )
    cfg = ControlConfig(setpoint=cfg.setpoint, n_iters=mc.n_iters, dt=cfg.dt,
                        p_min=cfg.p_min, p_max=cfg.p_max,
                        initial_temp=cfg.initial_temp)
    err_acc = _StreamingStats(mc.n_iters)
    pow_acc = _StreamingStats(mc.n_iters)
    retained = {it: np.empty(mc.paths) for it in record}

    blocks = [(start, min(start + _BLOCK, mc.paths))
              for start in range(0, mc.paths, _BLOCK)]

    def simulate(bounds):
        start, stop = bounds
        eps = _noise_block(mc.noise, mc.seed, mc.path_offset + start,
                           stop - start, mc.n_iters, domain)
        return _propagate_block(eps, cfg, gains, plant)

    workers = _worker_count()
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(simulate, blocks))  # merge in path order
    else:
        results = map(simulate, blocks)

    for (start, stop), (errors, powers) in zip(blocks, results):
        err_acc.add(errors)
        pow_acc.add(powers)
        for it in record:
            retained[it][start:stop] = errors[it - 1]

    return EnsembleResult(
        error_stats=err_acc.summarize(),
        power_stats=pow_acc.summarize(),
        retained=retained,
        e_ss=EmpiricalDistribution(retained[cfg.n_iters]),
    )


def ground_truth(cfg: ControlConfig, gains: PidGains, plant: LumpedParams,
                 noise: NoiseModel, m_gt: int, seed: int) -> EmpiricalDistribution:
    """Large-sample e_ss reference on the reserved ground-truth stream domain."""
    if m_gt < 10_000:
        raise ConfigError(f"ground truth needs m_gt >= 10000, got {m_gt}")
    mc = McConfig(paths=m_gt, noise=noise, seed=seed, n_iters=cfg.n_iters,
                  memory_budget_mb=max(512.0, m_gt * 8 * 2 / 1e6))
    return run_ensemble(mc, cfg, gains, plant, domain=DOMAIN_GROUND_TRUTH).e_ss
