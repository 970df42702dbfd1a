#!/usr/bin/env node
/**
 * plot <kind> --in FILE [--in2 FILE] --out IMG
 *
 * Kinds:
 *   error_fan     --in stats.csv [--in2 trajectory.csv]
 *   stats_panel   --in stats.csv
 *   bench_curves  --in bench_results.csv
 *   ess_hist      --in e_ss.csv
 *   calib_hist    --in calib_samples.csv
 *
 * Exit codes: 0 success, 2 validation/schema error, 1 anything else.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { benchCurves, calibHist, errorFan, essHist, statsPanel } from "./charts.js";
import { SchemaError, Table, ValidationError, parseCsv } from "./schema.js";

const KINDS = ["error_fan", "stats_panel", "bench_curves", "ess_hist", "calib_hist"];

interface Args {
  kind: string;
  inFile: string;
  in2File?: string;
  outFile: string;
}

function parseArgs(argv: string[]): Args {
  const [kind, ...rest] = argv;
  if (!kind || !KINDS.includes(kind)) {
    throw new ValidationError(
      `usage: plot <${KINDS.join("|")}> --in FILE [--in2 FILE] --out IMG`,
    );
  }
  const flags: Record<string, string> = {};
  for (let i = 0; i < rest.length; i += 2) {
    const key = rest[i];
    const value = rest[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new ValidationError(`malformed flag pair near ${key}`);
    }
    flags[key.slice(2)] = value;
  }
  const unknown = Object.keys(flags).filter((k) => !["in", "in2", "out"].includes(k));
  if (unknown.length > 0) {
    throw new ValidationError(`unknown flags: ${unknown.join(", ")}`);
  }
  if (!flags.in || !flags.out) {
    throw new ValidationError("both --in and --out are required");
  }
  return { kind, inFile: flags.in, in2File: flags.in2, outFile: flags.out };
}

function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new ValidationError(`cannot read input file ${path}`);
  }
  return parseCsv(text, path);
}

export function render(args: Args): string {
  const table = readTable(args.inFile);
  switch (args.kind) {
    case "error_fan":
      return errorFan(table, args.in2File ? readTable(args.in2File) : undefined);
    case "stats_panel":
      return statsPanel(table);
    case "bench_curves":
      return benchCurves(table);
    case "ess_hist":
      return essHist(table);
    case "calib_hist":
      return calibHist(table);
    default:
      throw new ValidationError(`unknown figure kind ${args.kind}`);
  }
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    writeFileSync(args.outFile, render(args));
    console.log(`wrote ${args.outFile}`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof ValidationError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
