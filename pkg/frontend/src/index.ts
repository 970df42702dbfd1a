export { benchCurves, calibHist, errorFan, essHist, statsPanel } from "./charts.js";
export { main, render } from "./cli.js";
export {
  BENCH_HEADER, STATS_HEADER, TRAJECTORY_HEADER, VALUE_HEADER,
  SchemaError, ValidationError, checkHeader, parseCsv,
} from "./schema.js";
