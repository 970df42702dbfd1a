"""Accuracy-vs-runtime benchmark of the two propagation engines.

For each noise model one large ground-truth e_ss sample set is generated, then
every (method, size) cell is run `repetitions` times; each run is timed with
the monotonic wall clock (one untimed warmup per cell) and scored by the
1-Wasserstein distance of its e_ss output against the ground truth. Timing
covers only the propagation run, never ground-truth generation or scoring.

Absolute milliseconds are hardware-bound; downstream assertions bind to
orderings and matched-accuracy runtime ratios only.
"""

from __future__ import annotations

import csv
import io
import json
import platform
import statistics as pystats
import time
from dataclasses import dataclass

from .distributions import wasserstein
from .errors import ConfigError
from .measurement import NoiseModel
from .mc import McConfig, ground_truth, run_ensemble
from .distengine import run_distributional
from .pid import ControlConfig, PidGains
from .thermal import LumpedParams

# Table-style defaults: MC sample ladder and representation-size ladder.
DEFAULT_MC_SIZES = (256, 512, 1152, 2048, 4096, 8192, 16000, 32000)
DEFAULT_REP_SIZES = (4, 16, 32, 64, 128)


@dataclass(frozen=True)
class BenchPlan:
    noises: tuple[NoiseModel, ...]
    mc_sizes: tuple[int, ...] = DEFAULT_MC_SIZES
    rep_sizes: tuple[int, ...] = DEFAULT_REP_SIZES
    repetitions: int = 30
    m_gt: int = 200_000
    seed: int = 0

    def __post_init__(self):
        if self.repetitions < 2:
            raise ConfigError(f"repetitions must be >= 2, got {self.repetitions}")
        if not self.mc_sizes or not self.rep_sizes or not self.noises:
            raise ConfigError("benchmark ladders and noise list must be non-empty")


@dataclass
class BenchmarkRecord:
    method: str          # "mc" | "distributional"
    size: int            # sample count or representation size
    noise: str           # noise tag, e.g. "gaussian:0,0.5"
    w1_mean: float
    w1_std: float
    runtime_ms_mean: float
    runtime_ms_std: float
    repetitions: int
    seed: int


def noise_tag(noise: NoiseModel) -> str:
    if noise.kind == "gaussian":
        return f"gaussian:{noise.mu:g},{noise.sigma:g}"
    if noise.kind == "uniform":
        return f"uniform:{noise.a:g},{noise.b:g}"
    return "none"


def timer_resolution_ns() -> int:
    res = time.get_clock_info("perf_counter").resolution
    return max(1, int(res * 1e9))


def _mean_std(values) -> tuple[float, float]:
    return (pystats.fmean(values),
            pystats.stdev(values) if len(values) > 1 else 0.0)


def run_benchmark(plan: BenchPlan, cfg: ControlConfig, gains: PidGains,
                  plant: LumpedParams, progress=None) -> tuple[list[BenchmarkRecord], dict]:
    """Returns (records, metadata). Cells run sequentially to keep timings clean."""
    records: list[BenchmarkRecord] = []
    smallest_ms = float("inf")
    for noise in plan.noises:
        tag = noise_tag(noise)
        gt = ground_truth(cfg, gains, plant, noise, plan.m_gt, plan.seed)

        def mc_run(m: int, rep: int):
            mc = McConfig(paths=m, noise=noise, seed=plan.seed,
                          n_iters=cfg.n_iters, path_offset=rep * m)
            return run_ensemble(mc, cfg, gains, plant).e_ss

        def dist_run(n: int, rep: int):
            return run_distributional(cfg, gains, plant, noise, n).e_ss

        for method, sizes, runner in (("mc", plan.mc_sizes, mc_run),
                                      ("distributional", plan.rep_sizes, dist_run)):
            for size in sizes:
                runner(size, plan.repetitions)  # untimed warmup
                w1s, times = [], []
                for rep in range(plan.repetitions):
                    t0 = time.perf_counter_ns()
                    out = runner(size, rep)
                    t1 = time.perf_counter_ns()
                    times.append((t1 - t0) / 1e6)
                    w1s.append(wasserstein(1, out, gt))
                w1_mean, w1_std = _mean_std(w1s)
                rt_mean, rt_std = _mean_std(times)
                smallest_ms = min(smallest_ms, min(times))
                records.append(BenchmarkRecord(
                    method=method, size=size, noise=tag,
                    w1_mean=w1_mean, w1_std=w1_std,
                    runtime_ms_mean=rt_mean, runtime_ms_std=rt_std,
                    repetitions=plan.repetitions, seed=plan.seed))
                if progress:
                    progress(records[-1])

    res_ns = timer_resolution_ns()
    warning = None
    if res_ns > 0.01 * smallest_ms * 1e6:
        warning = (f"timer resolution {res_ns} ns is coarser than 1% of the "
                   f"smallest measured run ({smallest_ms:.3f} ms)")
    metadata = {
        "hardware": platform.processor() or platform.machine(),
        "platform": platform.platform(),
        "timer_resolution_ns": res_ns,
        "timer_warning": warning,
        "m_gt": plan.m_gt,
        "repetitions": plan.repetitions,
        "seed": plan.seed,
        "cells_parallel": False,
    }
    return records, metadata


@dataclass
class SpeedupReport:
    noise: str
    matched: bool
    speedup: float
    mc_cell: BenchmarkRecord
    dist_cell: BenchmarkRecord


def speedup_at_matched_accuracy(records: list[BenchmarkRecord],
                                w1_rtol: float = 0.1) -> list[SpeedupReport]:
    """Per noise: MC runtime / distributional runtime at the smallest MC size
    whose mean W1 is at or below the selected distributional mean W1.

    The selected distributional cell is the fastest one whose mean W1 lies
    within w1_rtol of the minimum: W1 differences below the ground truth's own
    sampling resolution do not distinguish accuracy, so paying extra runtime
    for them would misstate the tradeoff.
    """
    by_noise: dict[str, list[BenchmarkRecord]] = {}
    for r in records:
        by_noise.setdefault(r.noise, []).append(r)
    out = []
    for noise, recs in by_noise.items():
        dist = [r for r in recs if r.method == "distributional"]
        mcs = sorted((r for r in recs if r.method == "mc"), key=lambda r: r.size)
        if not dist or not mcs:
            raise ConfigError(f"speedup for {noise!r} needs records from both methods")
        floor = min(r.w1_mean for r in dist)
        best = min((r for r in dist if r.w1_mean <= floor * (1.0 + w1_rtol)),
                   key=lambda r: r.runtime_ms_mean)
        matched = [r for r in mcs if r.w1_mean <= best.w1_mean]
        if matched:
            cell = matched[0]
            out.append(SpeedupReport(noise, True,
                                     cell.runtime_ms_mean / best.runtime_ms_mean,
                                     cell, best))
        else:
            cell = mcs[-1]
            out.append(SpeedupReport(noise, False,
                                     cell.runtime_ms_mean / best.runtime_ms_mean,
                                     cell, best))
    return out


BENCH_CSV_HEADER = ("method,size,noise,w1_mean,w1_std,"
                    "runtime_ms_mean,runtime_ms_std,repetitions,seed")


def records_to_csv_rows(records: list[BenchmarkRecord]) -> list[str]:
    """Header plus one row per record; the noise tag is quoted (it contains a
    comma)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in records:
        w.writerow([r.method, r.size, r.noise, repr(r.w1_mean), repr(r.w1_std),
                    repr(r.runtime_ms_mean), repr(r.runtime_ms_std),
                    r.repetitions, r.seed])
    return [BENCH_CSV_HEADER] + buf.getvalue().splitlines()


def metadata_json(metadata: dict, config_hash: str) -> str:
    return json.dumps({**metadata, "config_hash": config_hash}, indent=2)
