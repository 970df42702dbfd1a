/**
 * The five figure kinds. Each renderer takes already-parsed tables, validates
 * them against the producing command's schema, and returns an SVG string. No
 * statistics are recomputed here; the files are the single source of truth.
 */

import {
  BENCH_HEADER, STATS_HEADER, Table, TRAJECTORY_HEADER, VALUE_HEADER,
  ValidationError, checkHeader, numericColumn, stringColumn,
} from "./schema.js";
import { Frame, Svg, extent, frame } from "./svg.js";

const WIDTH = 720;
const HEIGHT = 480;
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

interface Series {
  iter: number[];
  mean: number[];
  std: number[];
  skew: number[];
  kurt: number[];
  mode: number[];
  ciLo: number[];
  ciHi: number[];
}

function errorSeries(table: Table, name: string): Series {
  checkHeader(table, STATS_HEADER, name);
  const signals = stringColumn(table, "signal");
  const pick = (col: string) =>
    numericColumn(table, col, name).filter((_, i) => signals[i] === "error");
  const s: Series = {
    iter: pick("iter"), mean: pick("mean"), std: pick("std"),
    skew: pick("skew"), kurt: pick("kurt"), mode: pick("mode"),
    ciLo: pick("ci_lo"), ciHi: pick("ci_hi"),
  };
  if (s.iter.length === 0) {
    throw new ValidationError(`${name}: no rows with signal=error`);
  }
  return s;
}

function zip(xs: number[], ys: number[]): Array<[number, number]> {
  return xs.map((x, i) => [x, ys[i]]);
}

/** Per-iteration error band (95% CI) with the mean and an optional
 * noise-free trajectory overlaid. */
export function errorFan(stats: Table, nominal?: Table): string {
  const s = errorSeries(stats, "stats");
  let overlay: Array<[number, number]> | undefined;
  if (nominal) {
    checkHeader(nominal, TRAJECTORY_HEADER, "trajectory");
    overlay = zip(numericColumn(nominal, "iter", "trajectory"),
                  numericColumn(nominal, "error", "trajectory"));
  }
  const svg = new Svg(WIDTH, HEIGHT);
  const yVals = [...s.ciLo, ...s.ciHi, ...(overlay ?? []).map(([, v]) => v)];
  const f = frame(svg, { left: 70, top: 40, width: WIDTH - 100, height: HEIGHT - 100 },
    extent(s.iter, 0), extent(yVals), {
      xLabel: "control iteration", yLabel: "tracking error (degC)",
      title: "Tracking error evolution",
    });
  const band: Array<[number, number]> = [
    ...zip(s.iter, s.ciHi).map(([x, v]): [number, number] => [f.x(x), f.y(v)]),
    ...zip(s.iter, s.ciLo).reverse().map(([x, v]): [number, number] => [f.x(x), f.y(v)]),
  ];
  svg.polygon(band, COLORS[0], 0.2);
  if (f.y.domain[0] < 0 && f.y.domain[1] > 0) {
    svg.line(f.left, f.y(0), f.right, f.y(0), "#999", 1, "4 3");
  }
  svg.polyline(zip(s.iter, s.mean).map(([x, v]) => [f.x(x), f.y(v)]), COLORS[0]);
  if (overlay) {
    svg.polyline(overlay.map(([x, v]) => [f.x(x), f.y(v)]), "#333", 1.2);
    svg.text(f.right - 8, f.top + 16, "nominal", 11, "end");
  }
  svg.text(f.left + 8, f.top + 16, "ensemble mean with 95% band", 11);
  return svg.render();
}

/** Six-panel summary of the error signal: mean, std, skewness, kurtosis,
 * mode, and the CI bounds, each against control iteration. */
export function statsPanel(stats: Table): string {
  const s = errorSeries(stats, "stats");
  const panels: Array<{ title: string; lines: Array<{ ys: number[]; color: string }> }> = [
    { title: "mean", lines: [{ ys: s.mean, color: COLORS[0] }] },
    { title: "standard deviation", lines: [{ ys: s.std, color: COLORS[0] }] },
    { title: "skewness", lines: [{ ys: s.skew, color: COLORS[0] }] },
    { title: "kurtosis", lines: [{ ys: s.kurt, color: COLORS[0] }] },
    { title: "mode", lines: [{ ys: s.mode, color: COLORS[0] }] },
    { title: "95% interval", lines: [{ ys: s.ciLo, color: COLORS[1] },
                                     { ys: s.ciHi, color: COLORS[2] }] },
  ];
  const w = 960;
  const h = 600;
  const svg = new Svg(w, h);
  panels.forEach((panel, i) => {
    const col = i % 3;
    const row = Math.floor(i / 3);
    const box = { left: 65 + col * 315, top: 40 + row * 290, width: 250, height: 210 };
    const yVals = panel.lines.flatMap((l) => l.ys);
    const f = frame(svg, box, extent(s.iter, 0), extent(yVals), {
      title: panel.title, xLabel: "iteration",
    });
    for (const line of panel.lines) {
      svg.polyline(zip(s.iter, line.ys).map(([x, v]) => [f.x(x), f.y(v)]), line.color);
    }
  });
  return svg.render();
}

interface BenchRow {
  method: string;
  size: number;
  noise: string;
  w1: number;
  w1Std: number;
  runtime: number;
  runtimeStd: number;
}

/** Two log-log panels per noise/method series: accuracy vs size and runtime
 * vs size. */
export function benchCurves(bench: Table): string {
  checkHeader(bench, BENCH_HEADER, "bench_results");
  const rows: BenchRow[] = bench.rows.map((_, i) => ({
    method: stringColumn(bench, "method")[i],
    size: numericColumn(bench, "size", "bench_results")[i],
    noise: stringColumn(bench, "noise")[i],
    w1: numericColumn(bench, "w1_mean", "bench_results")[i],
    w1Std: numericColumn(bench, "w1_std", "bench_results")[i],
    runtime: numericColumn(bench, "runtime_ms_mean", "bench_results")[i],
    runtimeStd: numericColumn(bench, "runtime_ms_std", "bench_results")[i],
  }));
  const keys = [...new Set(rows.map((r) => `${r.noise} | ${r.method}`))].sort();
  const svg = new Svg(1000, 520);
  const panels: Array<{ title: string; yLabel: string; value: (r: BenchRow) => number; err: (r: BenchRow) => number }> = [
    { title: "accuracy vs size", yLabel: "Wasserstein distance (degC)",
      value: (r) => r.w1, err: (r) => r.w1Std },
    { title: "runtime vs size", yLabel: "runtime (ms)",
      value: (r) => r.runtime, err: (r) => r.runtimeStd },
  ];
  panels.forEach((panel, p) => {
    const box = { left: 80 + p * 480, top: 50, width: 360, height: 360 };
    const positives = rows.map(panel.value).filter((v) => v > 0);
    const floor = positives.length > 0 ? Math.min(...positives) : 1e-6;
    const yVals = rows.map(panel.value).map((v) => (v > 0 ? v : floor));
    const f = frame(svg, box,
      [Math.min(...rows.map((r) => r.size)), Math.max(...rows.map((r) => r.size))],
      [Math.min(...yVals) / 1.5, Math.max(...yVals) * 1.5],
      { title: panel.title, xLabel: "samples / representation size",
        yLabel: panel.yLabel, logX: true, logY: true });
    keys.forEach((key, k) => {
      const series = rows
        .filter((r) => `${r.noise} | ${r.method}` === key)
        .sort((a, b) => a.size - b.size);
      const color = COLORS[k % COLORS.length];
      const pts = series.map((r): [number, number] => {
        const v = panel.value(r);
        return [f.x(r.size), f.y(v > 0 ? v : floor)];
      });
      svg.polyline(pts, color);
      series.forEach((r, i) => {
        svg.circle(pts[i][0], pts[i][1], 3, color);
        const v = panel.value(r);
        const e = panel.err(r);
        if (v > 0 && e > 0 && v - e > 0) {
          svg.line(pts[i][0], f.y(v - e), pts[i][0], f.y(v + e), color, 1);
        }
      });
    });
  });
  keys.forEach((key, k) => {
    const color = COLORS[k % COLORS.length];
    const y = 470 + Math.floor(k / 2) * 0; // single legend row
    const x = 90 + k * 230;
    svg.line(x, y, x + 22, y, color, 2);
    svg.text(x + 28, y + 4, key, 11);
  });
  return svg.render();
}

function histogram(values: number[], title: string, xLabel: string): string {
  const svg = new Svg(WIDTH, HEIGHT);
  const [lo, hi] = extent(values, 0);
  const nbins = 40;
  const width = (hi - lo) / nbins || 1;
  const counts = new Array<number>(nbins).fill(0);
  for (const v of values) {
    const i = Math.min(Math.floor((v - lo) / width), nbins - 1);
    counts[i] += 1;
  }
  const f = frame(svg, { left: 70, top: 40, width: WIDTH - 100, height: HEIGHT - 100 },
    [lo, hi], [0, Math.max(...counts) * 1.05],
    { title, xLabel, yLabel: "count" });
  counts.forEach((c, i) => {
    if (c === 0) return;
    const x0 = f.x(lo + i * width);
    const x1 = f.x(lo + (i + 1) * width);
    svg.rect(x0, f.y(c), x1 - x0, f.bottom - f.y(c), COLORS[0], "#fff");
  });
  svg.text(f.right - 8, f.top + 16, `n = ${values.length}`, 11, "end");
  return svg.render();
}

/** Histogram of steady-state tracking-error samples. */
export function essHist(samples: Table): string {
  checkHeader(samples, VALUE_HEADER, "e_ss");
  return histogram(numericColumn(samples, "value", "e_ss"),
    "Steady-state error distribution", "steady-state error (degC)");
}

/** Histogram of propagated calibrated-temperature samples. */
export function calibHist(samples: Table): string {
  checkHeader(samples, VALUE_HEADER, "calib_samples");
  return histogram(numericColumn(samples, "value", "calib_samples"),
    "Calibrated temperature distribution", "calibrated temperature (K)");
}
