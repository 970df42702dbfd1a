"""Uncertainty propagation benchmark for a laser-power PID loop.

Quantifies how temperature-measurement noise propagates through a closed-loop
laser power controller, comparing Monte Carlo ensemble propagation against a
deterministic single-pass Dirac-mixture engine on accuracy (exact 1-D
Wasserstein distance) and runtime.
"""

from .errors import SinterBenchError, ConfigError, NumericError, BudgetError
from .measurement import (NoiseModel, DEFAULT_GAUSSIAN, DEFAULT_UNIFORM,
                          parse_noise, substream, sample, measure)
from .thermal import (MaterialParams, GridSpec, GridState, LumpedParams,
                      LumpedState, heat_source, step_grid, step_lumped,
                      steady_state_temperature, spot_temperature)
from .pid import (PidGains, PidState, ControlConfig, TrajectoryPoint, pid_step,
                  run_nominal, steady_state_error, tune_nominal, PAPER_GAINS)
from .distributions import (EmpiricalDistribution, DiracMixture, SummaryStats,
                            quantize, compress, combine, stats, wasserstein,
                            weighted_percentile)
from .mc import McConfig, EnsembleResult, run_ensemble, run_path, ground_truth
from .distengine import DistResult, run_distributional, lift_through, noise_atoms
from .calibration import (CalibrationParams, CalibrationUncertainty, calibrate,
                          calibrate_distribution_mc, calibrate_distribution_mixture)
from .bench import (BenchPlan, BenchmarkRecord, SpeedupReport, run_benchmark,
                    speedup_at_matched_accuracy)

__version__ = "1.0.0"

__all__ = [
    "SinterBenchError", "ConfigError", "NumericError", "BudgetError",
    "NoiseModel", "DEFAULT_GAUSSIAN", "DEFAULT_UNIFORM", "parse_noise",
    "substream", "sample", "measure",
    "MaterialParams", "GridSpec", "GridState", "LumpedParams", "LumpedState",
    "heat_source", "step_grid", "step_lumped", "steady_state_temperature",
    "spot_temperature",
    "PidGains", "PidState", "ControlConfig", "TrajectoryPoint", "pid_step",
    "run_nominal", "steady_state_error", "tune_nominal", "PAPER_GAINS",
    "EmpiricalDistribution", "DiracMixture", "SummaryStats", "quantize",
    "compress", "combine", "stats", "wasserstein", "weighted_percentile",
    "McConfig", "EnsembleResult", "run_ensemble", "run_path", "ground_truth",
    "DistResult", "run_distributional", "lift_through", "noise_atoms",
    "CalibrationParams", "CalibrationUncertainty", "calibrate",
    "calibrate_distribution_mc", "calibrate_distribution_mixture",
    "BenchPlan", "BenchmarkRecord", "SpeedupReport", "run_benchmark",
    "speedup_at_matched_accuracy",
]
