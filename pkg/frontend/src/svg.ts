/**
 * Minimal deterministic SVG builder: fixed canvas, fixed fonts, no timestamps
 * or randomness, coordinates rounded to fixed precision. Rendering the same
 * data twice yields byte-identical files.
 */

export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const r = Math.round(v * 100) / 100;
  return Object.is(r, -0) ? "0" : String(r);
}

/** Axis tick label: trims trailing zeros at a fixed significant precision. */
export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 10000 || a < 0.001) return v.toExponential(1).replace("e+", "e");
  return String(Number(v.toPrecision(4)));
}

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const f = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.log = false;
  return f;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  const f = ((v: number) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0)) as Scale;
  f.domain = domain;
  f.range = range;
  f.log = true;
  return f;
}

/** Round-number ticks covering the domain (1/2/5 ladder; powers of ten when log). */
export function ticks(scale: Scale, target = 5): number[] {
  const [d0, d1] = scale.domain;
  if (scale.log) {
    const out: number[] = [];
    for (let e = Math.ceil(Math.log10(d0)); e <= Math.floor(Math.log10(d1)); e++) {
      out.push(10 ** e);
    }
    return out.length >= 2 ? out : [d0, d1];
  }
  const span = d1 - d0 || 1;
  const step0 = 10 ** Math.floor(Math.log10(span / target));
  const step = [1, 2, 5, 10]
    .map((m) => m * step0)
    .find((s) => span / s <= target * 1.5) ?? step0 * 10;
  const out: number[] = [];
  for (let v = Math.ceil(d0 / step) * step; v <= d1 + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  add(part: string): void {
    this.parts.push(part);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, w = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.add(`<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${w}"${d}/>`);
  }

  polyline(points: Array<[number, number]>, stroke: string, w = 1.5): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${w}"/>`);
  }

  polygon(points: Array<[number, number]>, fill: string, opacity = 1): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.add(`<polygon points="${pts}" fill="${fill}" fill-opacity="${fmt(opacity)}" stroke="none"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.add(`<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}" stroke="${stroke}"/>`);
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.add(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"/>`);
  }

  text(x: number, y: number, s: string, size = 11, anchor = "start", extra = ""): void {
    const esc = s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
    this.add(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" ${FONT}${extra ? " " + extra : ""}>${esc}</text>`);
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">`,
      `<rect width="${this.width}" height="${this.height}" fill="white"/>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

export interface Frame {
  x: Scale;
  y: Scale;
  left: number;
  top: number;
  right: number;
  bottom: number;
}

/** Draw a framed plot area with ticks and axis labels; returns the scales. */
export function frame(
  svg: Svg,
  box: { left: number; top: number; width: number; height: number },
  xDomain: [number, number],
  yDomain: [number, number],
  opts: { xLabel?: string; yLabel?: string; title?: string; logX?: boolean; logY?: boolean } = {},
): Frame {
  const right = box.left + box.width;
  const bottom = box.top + box.height;
  const x = (opts.logX ? logScale : linearScale)(xDomain, [box.left, right]);
  const y = (opts.logY ? logScale : linearScale)(yDomain, [bottom, box.top]);
  svg.rect(box.left, box.top, box.width, box.height, "none", "#333");
  for (const t of ticks(x)) {
    svg.line(x(t), bottom, x(t), bottom + 4, "#333");
    svg.text(x(t), bottom + 16, tickLabel(t), 10, "middle");
  }
  for (const t of ticks(y)) {
    svg.line(box.left - 4, y(t), box.left, y(t), "#333");
    svg.text(box.left - 6, y(t) + 3.5, tickLabel(t), 10, "end");
  }
  if (opts.xLabel) svg.text(box.left + box.width / 2, bottom + 32, opts.xLabel, 12, "middle");
  if (opts.yLabel) {
    const cx = box.left - 42;
    const cy = box.top + box.height / 2;
    svg.add(`<text x="${fmt(cx)}" y="${fmt(cy)}" font-size="12" text-anchor="middle" ${FONT} transform="rotate(-90 ${fmt(cx)} ${fmt(cy)})">${opts.yLabel}</text>`);
  }
  if (opts.title) svg.text(box.left + box.width / 2, box.top - 8, opts.title, 13, "middle");
  return { x, y, left: box.left, top: box.top, right, bottom };
}

export function extent(values: number[], padFrac = 0.05): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(lo < hi)) {
    const c = Number.isFinite(lo) ? lo : 0;
    return [c - 1, c + 1];
  }
  const pad = (hi - lo) * padFrac;
  return [lo - pad, hi + pad];
}
