"""Command-line entry point.

Subcommands: sim, mc, dist, calib, bench, tune. Every command accepts --seed
for bit-exact reproduction and --out for the output directory; every output
file embeds a hash of the resolved configuration (CSV comment line or JSON
key) so downstream figures can verify provenance.

Exit codes: 0 success, 2 config/validation, 3 numeric/domain, 4 resource
budget.
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
import sys
from pathlib import Path

from .bench import (DEFAULT_MC_SIZES, DEFAULT_REP_SIZES, BenchPlan, metadata_json,
                    records_to_csv_rows, run_benchmark, speedup_at_matched_accuracy)
from .calibration import (CalibrationParams, CalibrationUncertainty, calibrate,
                          calibrate_distribution_mc, calibrate_distribution_mixture)
from .distributions import stats
from .distengine import run_distributional
from .errors import SinterBenchError, ConfigError
from .mc import McConfig, run_ensemble
from .measurement import DOMAIN_SIM, NoiseModel, parse_noise, sample, substream
from .pid import (ControlConfig, PidGains, PidState, TrajectoryPoint, pid_step,
                  run_nominal, tune_nominal)
from .thermal import LumpedParams, LumpedState, step_lumped

STATS_CSV_HEADER = "iter,signal,mean,std,skew,kurt,mode,ci_lo,ci_hi"
TRAJECTORY_CSV_HEADER = "iter,error,power,temp"
RETAINED_CSV_HEADER = "iter,path,value"


def config_hash(resolved: dict) -> str:
    blob = json.dumps(resolved, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _write_csv(path: Path, header: str, rows, chash: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# config_hash={chash}\n")
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _write_json(path: Path, payload: dict, chash: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"config_hash": chash, **payload}
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return cfg


def _block(cfg: dict, name: str, cls, **overrides):
    """Build a dataclass from a config block plus non-None flag overrides."""
    fields = dict(cfg.get(name, {}))
    fields.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return cls(**fields)
    except TypeError as exc:
        raise ConfigError(f"config block {name!r}: {exc}") from exc


def _resolve_common(args) -> tuple[dict, ControlConfig, PidGains, LumpedParams]:
    cfg = _load_config(getattr(args, "config", None))
    control = _block(cfg, "control", ControlConfig,
                     n_iters=getattr(args, "iters", None))
    gains = _block(cfg, "gains", PidGains)
    plant = _block(cfg, "plant", LumpedParams)
    return cfg, control, gains, plant


def _resolved_dict(args, extra: dict) -> dict:
    # the output directory and verbosity do not affect results
    d = {k: v for k, v in vars(args).items() if k not in ("func", "out", "verbose")}
    d.update(extra)
    return d


def cmd_sim(args) -> int:
    cfg, control, gains, plant = _resolve_common(args)
    noise = parse_noise(args.noise)
    chash = config_hash(_resolved_dict(args, {"command": "sim"}))
    if noise.kind == "none":
        traj = run_nominal(control, gains, plant)
    else:
        rng = substream(args.seed, 0, DOMAIN_SIM)
        eps = sample(noise, rng, control.n_iters)
        state = LumpedState(t_spot=control.initial_temp)
        pid = PidState()
        traj = []
        for i in range(1, control.n_iters + 1):
            error = float(control.setpoint - (state.t_spot + eps[i - 1]))
            power, pid = pid_step(gains, pid, error, control.dt,
                                  (control.p_min, control.p_max))
            state = step_lumped(state, plant, power, control.dt)
            traj.append(TrajectoryPoint(iter=i, error=float(error),
                                        power=float(power), temp=state.t_spot))
    rows = [f"{p.iter},{p.error!r},{p.power!r},{p.temp!r}" for p in traj]
    out = Path(args.out) / "trajectory.csv"
    _write_csv(out, TRAJECTORY_CSV_HEADER, rows, chash)
    print(f"wrote {out} ({len(rows)} iterations, final error {traj[-1].error:.4f})")
    return 0


def _stats_rows(error_stats, power_stats) -> list[str]:
    rows = []
    for signal, series in (("error", error_stats), ("power", power_stats)):
        for i, s in enumerate(series, start=1):
            rows.append(f"{i},{signal},{s.mean!r},{s.std!r},{s.skewness!r},"
                        f"{s.kurtosis!r},{s.mode!r},{s.ci_lo!r},{s.ci_hi!r}")
    return rows


def cmd_mc(args) -> int:
    cfg, control, gains, plant = _resolve_common(args)
    noise = parse_noise(args.noise)
    chash = config_hash(_resolved_dict(args, {"command": "mc"}))
    record = tuple(args.record) if args.record else ()
    mc = McConfig(paths=args.paths, noise=noise, seed=args.seed,
                  n_iters=control.n_iters, record_iters=record,
                  memory_budget_mb=args.memory_budget_mb)
    res = run_ensemble(mc, control, gains, plant)
    out = Path(args.out)
    _write_csv(out / "stats.csv", STATS_CSV_HEADER,
               _stats_rows(res.error_stats, res.power_stats), chash)
    _write_csv(out / "e_ss.csv", "value",
               [repr(float(v)) for v in res.e_ss.samples], chash)
    if record:
        kept = sorted(set(record) | {control.n_iters})  # final iter always retained
        rows = [f"{it},{p},{float(v)!r}"
                for it in kept for p, v in enumerate(res.retained[it])]
        _write_csv(out / "retained.csv", RETAINED_CSV_HEADER, rows, chash)
    final = res.error_stats[-1]
    print(f"wrote {out}/stats.csv and {out}/e_ss.csv "
          f"(final error mean {final.mean:.4f}, std {final.std:.4f})")
    return 0


def cmd_dist(args) -> int:
    cfg, control, gains, plant = _resolve_common(args)
    noise = parse_noise(args.noise)
    chash = config_hash(_resolved_dict(args, {"command": "dist"}))
    res = run_distributional(control, gains, plant, noise, args.rep)
    error_stats = [stats(m) for m in res.error_mixtures]
    power_stats = [stats(m) for m in res.power_mixtures]
    out = Path(args.out)
    _write_csv(out / "stats.csv", STATS_CSV_HEADER,
               _stats_rows(error_stats, power_stats), chash)
    _write_json(out / "e_ss.json", {"points": res.e_ss.to_json_points()}, chash)
    final = error_stats[-1]
    print(f"wrote {out}/stats.csv and {out}/e_ss.json "
          f"(final error mean {final.mean:.4f}, std {final.std:.4f})")
    return 0


def cmd_calib(args) -> int:
    chash = config_hash(_resolved_dict(args, {"command": "calib"}))
    nominal = CalibrationParams()
    if args.point or (args.mc is None and args.mixture is None):
        val = calibrate(args.raw, nominal, true_kelvin=args.true_kelvin)
        print(f"{val:.4f}")
        return 0
    u = CalibrationUncertainty.paper_defaults(sane_t_refl=not args.verbatim_t_refl)
    out = Path(args.out)
    if args.mc is not None:
        d = calibrate_distribution_mc(args.raw, u, args.mc, seed=args.seed,
                                      nominal=nominal)
        _write_csv(out / "calib_samples.csv", "value",
                   [repr(float(v)) for v in d.samples], chash)
        s = stats(d)
        print(f"wrote {out}/calib_samples.csv "
              f"(mean {s.mean:.3f}, 95% CI [{s.ci_lo:.2f}, {s.ci_hi:.2f}])")
    else:
        m = calibrate_distribution_mixture(args.raw, u, args.mixture, nominal=nominal)
        _write_json(out / "calib_mixture.json", {"points": m.to_json_points()}, chash)
        print(f"wrote {out}/calib_mixture.json (mean {m.mean:.3f})")
    return 0


def _plan_from_args(args) -> BenchPlan:
    plan_cfg = _load_config(args.plan)
    noises = tuple(parse_noise(s) for s in plan_cfg.get(
        "noises", ["gaussian:0,0.5", "uniform:-1.5,1.5"]))
    kw = dict(
        noises=noises,
        mc_sizes=tuple(plan_cfg.get("mc_sizes", DEFAULT_MC_SIZES)),
        rep_sizes=tuple(plan_cfg.get("rep_sizes", DEFAULT_REP_SIZES)),
        repetitions=plan_cfg.get("repetitions", 30),
        m_gt=plan_cfg.get("m_gt", 200_000),
        seed=plan_cfg.get("seed", args.seed),
    )
    if args.repetitions is not None:
        kw["repetitions"] = args.repetitions
    if args.quick:
        kw["mc_sizes"] = tuple(s for s in kw["mc_sizes"] if s <= 4096)
        kw["m_gt"] = min(kw["m_gt"], 20_000)
    return BenchPlan(**kw)


def cmd_bench(args) -> int:
    cfg, control, gains, plant = _resolve_common(args)
    plan = _plan_from_args(args)
    chash = config_hash(_resolved_dict(args, {"command": "bench"}))

    def progress(rec):
        print(f"  {rec.method:>14} size={rec.size:<6} noise={rec.noise:<18} "
              f"W1={rec.w1_mean:.4f} t={rec.runtime_ms_mean:.2f} ms", flush=True)

    records, metadata = run_benchmark(plan, control, gains, plant,
                                      progress=progress if args.verbose else None)
    out = Path(args.out)
    _write_csv(out / "bench_results.csv", records_to_csv_rows(records)[0],
               records_to_csv_rows(records)[1:], chash)
    (out / "bench_metadata.json").write_text(metadata_json(metadata, chash) + "\n")
    for rep in speedup_at_matched_accuracy(records):
        tag = "matched" if rep.matched else "not matched (upper bound)"
        print(f"{rep.noise}: speedup {rep.speedup:.1f}x at matched accuracy "
              f"[{tag}; MC size {rep.mc_cell.size} vs rep size {rep.dist_cell.size}]")
    print(f"wrote {out}/bench_results.csv ({len(records)} records)")
    return 0


def _parse_grid(spec: str):
    """'kp=0.05,0.1;ki=0.01,0.05;kd=0' -> cartesian product of PidGains."""
    axes = {}
    try:
        for part in spec.split(";"):
            name, vals = part.split("=", 1)
            axes[name.strip()] = [float(v) for v in vals.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse gain grid {spec!r}") from exc
    unknown = set(axes) - {"kp", "ki", "kd"}
    if unknown:
        raise ConfigError(f"unknown gain axes {sorted(unknown)}")
    kps = axes.get("kp", [PidGains().kp])
    kis = axes.get("ki", [PidGains().ki])
    kds = axes.get("kd", [PidGains().kd])
    return [PidGains(kp=a, ki=b, kd=c)
            for a, b, c in itertools.product(kps, kis, kds)]


def cmd_tune(args) -> int:
    cfg, control, _, plant = _resolve_common(args)
    chash = config_hash(_resolved_dict(args, {"command": "tune"}))
    best = tune_nominal(control, plant, _parse_grid(args.grid))
    payload = {"kp": best.kp, "ki": best.ki, "kd": best.kd}
    _write_json(Path(args.out) / "best_gains.json", payload, chash)
    print(json.dumps(payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sinterbench",
        description="Closed-loop laser-power control under temperature-measurement "
                    "uncertainty: simulation, propagation engines, calibration, "
                    "and benchmarks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--iters", type=int, help="control iterations override")

    p = sub.add_parser("sim", help="single closed-loop trajectory")
    common(p)
    p.add_argument("--noise", default="none")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("mc", help="Monte Carlo ensemble propagation")
    common(p)
    p.add_argument("--noise", default="gaussian:0,0.5")
    p.add_argument("--paths", type=int, required=True)
    p.add_argument("--record", type=int, nargs="*",
                   help="iterations whose full sample vectors are retained")
    p.add_argument("--memory-budget-mb", type=float, default=512.0)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("dist", help="single-pass distributional propagation")
    common(p)
    p.add_argument("--noise", default="gaussian:0,0.5")
    p.add_argument("--rep", type=int, required=True, help="representation size")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("calib", help="radiometric calibration")
    common(p)
    p.add_argument("--raw", type=float, required=True, help="raw ADC reading")
    p.add_argument("--point", action="store_true", help="print the point value")
    p.add_argument("--mc", type=int, help="Monte Carlo sample count")
    p.add_argument("--mixture", type=int, help="deterministic mixture size")
    p.add_argument("--true-kelvin", action="store_true",
                   help="re-base the point value by +273.15")
    p.add_argument("--verbatim-t-refl", action="store_true",
                   help="use the published reflected-temperature interval centred on 0 K")
    p.set_defaults(func=cmd_calib)

    p = sub.add_parser("bench", help="accuracy-vs-runtime benchmark")
    common(p)
    p.add_argument("--plan", help="JSON benchmark plan")
    p.add_argument("--repetitions", type=int)
    p.add_argument("--quick", action="store_true",
                   help="trim the MC ladder and ground-truth size")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("tune", help="grid-search controller gains")
    common(p)
    p.add_argument("--grid", required=True,
                   help="e.g. 'kp=0.05,0.1;ki=0.01,0.05;kd=0,5e-5'")
    p.set_defaults(func=cmd_tune)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SinterBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
