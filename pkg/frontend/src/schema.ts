/**
 * CSV schema contracts for the harness's output files.
 *
 * Validation is strict: headers must match the producing command's documented
 * schema exactly, and mismatches are reported by column name so drift between
 * the two components surfaces at the boundary instead of as a garbled figure.
 */

import Papa from "papaparse";

export class SchemaError extends Error {}
export class ValidationError extends Error {}

export const STATS_HEADER = [
  "iter", "signal", "mean", "std", "skew", "kurt", "mode", "ci_lo", "ci_hi",
];
export const TRAJECTORY_HEADER = ["iter", "error", "power", "temp"];
export const BENCH_HEADER = [
  "method", "size", "noise", "w1_mean", "w1_std",
  "runtime_ms_mean", "runtime_ms_std", "repetitions", "seed",
];
export const VALUE_HEADER = ["value"];

export interface Table {
  header: string[];
  rows: string[][];
}

/** Parse CSV text, skipping the leading `# config_hash=...` comment line. */
export function parseCsv(text: string, name: string): Table {
  const body = text
    .split("\n")
    .filter((line) => !line.startsWith("#"))
    .join("\n");
  const parsed = Papa.parse<string[]>(body.trim(), { skipEmptyLines: true });
  if (parsed.data.length === 0) {
    throw new ValidationError(`${name}: file contains no header row`);
  }
  const [header, ...rows] = parsed.data;
  return { header, rows };
}

export function checkHeader(table: Table, expected: string[], name: string): void {
  const missing = expected.filter((c) => !table.header.includes(c));
  const unexpected = table.header.filter((c) => !expected.includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    const parts = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (unexpected.length > 0) parts.push(`unexpected columns: ${unexpected.join(", ")}`);
    throw new SchemaError(`${name}: header mismatch (${parts.join("; ")})`);
  }
  const misordered = expected.some((c, i) => table.header[i] !== c);
  if (misordered) {
    throw new SchemaError(
      `${name}: columns out of order (expected ${expected.join(",")})`,
    );
  }
  if (table.rows.length === 0) {
    throw new ValidationError(`${name}: no data rows`);
  }
}

export function numericColumn(table: Table, column: string, name: string): number[] {
  const idx = table.header.indexOf(column);
  return table.rows.map((row, r) => {
    const v = Number(row[idx]);
    if (!Number.isFinite(v)) {
      throw new ValidationError(
        `${name}: row ${r + 1}, column ${column}: not a finite number (${row[idx]})`,
      );
    }
    return v;
  });
}

export function stringColumn(table: Table, column: string): string[] {
  const idx = table.header.indexOf(column);
  return table.rows.map((row) => row[idx]);
}
