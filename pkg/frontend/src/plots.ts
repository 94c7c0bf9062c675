/** The three figure kinds for flatwave diagnostics CSVs.
 *
 * trace: time series of the Hamiltonian and the symmetrized energy.
 * loglog_fit: per-series error-vs-eps lines with least-squares slopes
 *   annotated; the fitted slope is recomputed from the rows and never taken
 *   from the file, so rendering cannot reinterpret the numbers.
 * heatmap: a column over the (|xi|, |eta|) plane.
 */

import { CsvError, categoricalColumn, parseCsv, requireColumns } from "./csv.js";
import { logLogFit } from "./fit.js";
import { SvgCanvas, divergingColor, extent } from "./svg.js";

export type PlotKind = "trace" | "loglog_fit" | "heatmap";

export interface PlotSpec {
  kind: PlotKind;
  inputText: string;
  /** heatmap value column (default assembled_minus_closed is too small to
   * see; q_flat is the default) */
  valueColumn?: string;
  xLabel?: string;
  yLabel?: string;
}

export interface RenderResult {
  svg: string;
  /** per-series fitted slopes (loglog_fit only) */
  slopes: Map<string, { slope: number; stderr: number }>;
}

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

export function render(spec: PlotSpec): RenderResult {
  switch (spec.kind) {
    case "trace":
      return renderTrace(spec);
    case "loglog_fit":
      return renderLogLogFit(spec);
    case "heatmap":
      return renderHeatmap(spec);
    default:
      throw new CsvError(`unknown plot kind '${spec.kind as string}'`);
  }
}

function ticks(e: { min: number; max: number }, n = 5): Array<[number, string]> {
  const out: Array<[number, string]> = [];
  for (let i = 0; i <= n; i++) {
    const v = e.min + ((e.max - e.min) * i) / n;
    out.push([i / n, formatTick(v)]);
  }
  return out;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) return v.toPrecision(3);
  return v.toExponential(1);
}

function renderTrace(spec: PlotSpec): RenderResult {
  const table = parseCsv(spec.inputText);
  requireColumns(table, ["t", "hamiltonian", "e_n0"]);
  const t = table.data.get("t")!;
  const series = ["hamiltonian", "e_n0"];
  const canvas = new SvgCanvas();
  const ex = extent(t);
  const ey = extent(series.flatMap((s) => table.data.get(s)!));
  const sx = (v: number) => canvas.xPix((v - ex.min) / (ex.max - ex.min));
  const sy = (v: number) => canvas.yPix((v - ey.min) / (ey.max - ey.min));
  series.forEach((name, i) => {
    const ys = table.data.get(name)!;
    canvas.polyline(
      t.map((tv, j) => [sx(tv), sy(ys[j])] as [number, number]),
      COLORS[i % COLORS.length],
    );
    canvas.text(canvas.xPix(0.02), canvas.yPix(0.95 - 0.06 * i), name, `fill="${COLORS[i % COLORS.length]}"`);
  });
  canvas.axes(spec.xLabel ?? "t", spec.yLabel ?? "value", ticks(ex), ticks(ey));
  return { svg: canvas.render(), slopes: new Map() };
}

function renderLogLogFit(spec: PlotSpec): RenderResult {
  const table = parseCsv(spec.inputText);
  requireColumns(table, ["series", "eps", "error"]);
  const names = categoricalColumn(spec.inputText, 0);
  const eps = table.data.get("eps")!;
  const err = table.data.get("error")!;
  const groups = new Map<string, Array<[number, number]>>();
  names.forEach((name, i) => {
    if (!Number.isFinite(eps[i]) || !(eps[i] > 0) || !(err[i] > 0)) return;
    if (!groups.has(name)) groups.set(name, []);
    groups.get(name)!.push([eps[i], err[i]]);
  });
  const slopes = new Map<string, { slope: number; stderr: number }>();
  const canvas = new SvgCanvas();
  const fitted = [...groups.entries()].filter(([, pts]) => pts.length >= 2);
  if (fitted.length === 0) {
    throw new CsvError("no series with at least two positive (eps, error) points");
  }
  const lx = fitted.flatMap(([, pts]) => pts.map((p) => Math.log10(p[0])));
  const ly = fitted.flatMap(([, pts]) => pts.map((p) => Math.log10(p[1])));
  const ex = extent(lx);
  const ey = extent(ly);
  const sx = (v: number) => canvas.xPix((Math.log10(v) - ex.min) / (ex.max - ex.min));
  const sy = (v: number) => canvas.yPix((Math.log10(v) - ey.min) / (ey.max - ey.min));
  fitted.forEach(([name, pts], i) => {
    pts.sort((a, b) => a[0] - b[0]);
    const color = COLORS[i % COLORS.length];
    canvas.polyline(pts.map(([x, y]) => [sx(x), sy(y)] as [number, number]), color);
    for (const [x, y] of pts) canvas.circle(sx(x), sy(y), 3, color);
    const fit = logLogFit(pts.map((p) => p[0]), pts.map((p) => p[1]));
    slopes.set(name, { slope: fit.slope, stderr: fit.stderr });
    canvas.text(
      canvas.xPix(0.02),
      canvas.yPix(0.95 - 0.06 * i),
      `${name}: slope ${fit.slope.toFixed(4)} ± ${fit.stderr.toFixed(4)}`,
      `fill="${color}"`,
    );
  });
  canvas.axes(spec.xLabel ?? "eps (log10)", spec.yLabel ?? "error (log10)", ticks(ex), ticks(ey));
  return { svg: canvas.render(), slopes };
}

function renderHeatmap(spec: PlotSpec): RenderResult {
  const table = parseCsv(spec.inputText);
  const value = spec.valueColumn ?? "q_flat";
  requireColumns(table, ["xi_abs", "eta_abs", value]);
  const xa = table.data.get("xi_abs")!;
  const ea = table.data.get("eta_abs")!;
  const v = table.data.get(value)!;
  const nbin = 48;
  const ex = extent(xa);
  const ey = extent(ea);
  const sums = new Float64Array(nbin * nbin);
  const counts = new Float64Array(nbin * nbin);
  for (let i = 0; i < xa.length; i++) {
    const bx = Math.min(nbin - 1, Math.floor(((xa[i] - ex.min) / (ex.max - ex.min)) * nbin));
    const by = Math.min(nbin - 1, Math.floor(((ea[i] - ey.min) / (ey.max - ey.min)) * nbin));
    sums[by * nbin + bx] += v[i];
    counts[by * nbin + bx] += 1;
  }
  let scale = 0;
  for (let i = 0; i < sums.length; i++) {
    if (counts[i] > 0) scale = Math.max(scale, Math.abs(sums[i] / counts[i]));
  }
  if (scale === 0) scale = 1;
  const canvas = new SvgCanvas();
  const cw = canvas.plotWidth / nbin;
  const ch = canvas.plotHeight / nbin;
  for (let by = 0; by < nbin; by++) {
    for (let bx = 0; bx < nbin; bx++) {
      const c = counts[by * nbin + bx];
      if (c === 0) continue;
      const t = sums[by * nbin + bx] / c / scale;
      canvas.rect(
        canvas.xPix(bx / nbin),
        canvas.yPix((by + 1) / nbin),
        cw + 0.5,
        ch + 0.5,
        divergingColor(t),
      );
    }
  }
  canvas.axes(spec.xLabel ?? "|xi|", spec.yLabel ?? "|eta|", ticks(ex), ticks(ey));
  canvas.text(canvas.xPix(0.02), 20, `${value} (scale ${scale.toExponential(2)})`);
  return { svg: canvas.render(), slopes: new Map() };
}
