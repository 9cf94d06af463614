/**
 * One recipe per scenario: which rows to select, what goes on each axis,
 * log flags, and the reference overlays (fitted guide lines, marker
 * verticals). Guide exponents come from the shared least-squares fit so they
 * agree with the producing pipeline's own fits.
 */

import { Row, plottable } from "./schema.js";
import { fitScaling } from "./fit.js";
import { PALETTE, Panel, document, heatColor, linearScale, logScale } from "./svg.js";

export interface Rendered {
  svg: string;
  /** fitted guide-line exponents, keyed by overlay name */
  fits: Record<string, number>;
}

const W = 560;
const H = 400;
const BOX = { left: 70, top: 30, width: W - 100, height: H - 80 };

function extent(vals: number[], log: boolean): [number, number] {
  const xs = log ? vals.filter((v) => v > 0) : vals;
  if (xs.length === 0) throw new Error("no finite positive data to plot");
  let lo = Math.min(...xs);
  let hi = Math.max(...xs);
  if (log) {
    lo /= 1.3;
    hi *= 1.3;
  } else {
    const pad = 0.05 * (hi - lo || 1);
    lo -= pad;
    hi += pad;
  }
  return [lo, hi];
}

interface Series {
  name: string;
  xs: number[];
  ys: number[];
}

function collect(rows: Row[], x: (r: Row) => number, key: (r: Row) => string | null): Series[] {
  const map = new Map<string, { xs: number[]; ys: number[] }>();
  for (const r of rows) {
    const k = key(r);
    if (k === null) continue;
    if (!map.has(k)) map.set(k, { xs: [], ys: [] });
    const s = map.get(k)!;
    s.xs.push(x(r));
    s.ys.push(r.value);
  }
  const out: Series[] = [];
  for (const [name, s] of [...map.entries()].sort((a, b) => a[0].localeCompare(b[0]))) {
    const order = s.xs.map((_, i) => i).sort((i, j) => s.xs[i] - s.xs[j]);
    out.push({ name, xs: order.map((i) => s.xs[i]), ys: order.map((i) => s.ys[i]) });
  }
  return out;
}

function lineFigure(
  title: string,
  series: Series[],
  opts: { xLabel: string; yLabel: string; logX?: boolean; logY?: boolean },
  decorate?: (panel: Panel, fits: Record<string, number>) => void,
): Rendered {
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys);
  const x = (opts.logX ? logScale : linearScale)(extent(xs, !!opts.logX), [BOX.left, BOX.left + BOX.width]);
  const y = (opts.logY ? logScale : linearScale)(extent(ys, !!opts.logY), [BOX.top + BOX.height, BOX.top]);
  const panel = new Panel(x, y, BOX);
  panel.axes(opts.xLabel, opts.yLabel);
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    panel.line(s.xs, s.ys, color);
    panel.dots(s.xs, s.ys, color);
    panel.label(s.name, i, color);
  });
  const fits: Record<string, number> = {};
  if (decorate) decorate(panel, fits);
  return { svg: document(W, H, title, [panel]), fits };
}

/** Power-law guide anchored at the largest-x point of the reference series. */
function guide(
  panel: Panel,
  fits: Record<string, number>,
  name: string,
  s: Series,
  fitRange?: (x: number) => boolean,
): void {
  const keep = s.xs.map((_, i) => i).filter((i) => s.ys[i] > 0 && (!fitRange || fitRange(s.xs[i])));
  if (keep.length < 4) return;
  const xs = keep.map((i) => s.xs[i]);
  const ys = keep.map((i) => s.ys[i]);
  const fit = fitScaling(xs, ys, "powerlaw");
  fits[name] = fit.exponent;
  const xa = xs[xs.length - 1];
  const ya = ys[ys.length - 1];
  const gx: number[] = [];
  const gy: number[] = [];
  for (let i = 0; i <= 40; i++) {
    const x = xs[0] * Math.pow(xa / xs[0], i / 40);
    gx.push(x);
    gy.push(ya * Math.pow(x / xa, fit.exponent));
  }
  panel.line(gx, gy, "#000", "5,3", 1.2);
  panel.label(`${name}: slope ${fit.exponent.toFixed(2)}`, 7, "#000");
}

const byObservable = (names: string[]) => (r: Row) =>
  names.includes(r.observable_name) ? r.observable_name : null;

function fig1b(rows: Row[]): Rendered {
  const data = plottable(rows).filter((r) => r.t !== null);
  return lineFigure(
    "ultra-fast shot: transmitted weight and photon occupation",
    collect(data, (r) => r.t!, byObservable(["transmission", "cavity_occupation", "in_cavity"])),
    { xLabel: "t J", yLabel: "weight" },
  );
}

function fig2a(rows: Row[]): Rendered {
  return lineFigure(
    "transmission spectrum at strong collective coupling",
    collect(plottable(rows), (r) => r.Delta,
            byObservable(["T_ts", "T_tl", "analytic_T", "analytic_T_pbc"])),
    { xLabel: "Delta / J", yLabel: "T" },
  );
}

function fig2b(rows: Row[]): Rendered {
  const data = plottable(rows).filter((r) => r.observable_name === "max_T_ts");
  const ns = [...new Set(data.map((r) => r.N))].sort((a, b) => a - b);
  const gs = [...new Set(data.map((r) => r.g))].sort((a, b) => a - b);
  const x = logScale([ns[0] / 1.2, ns[ns.length - 1] * 1.2], [BOX.left, BOX.left + BOX.width]);
  const y = logScale([gs[0] / 1.2, gs[gs.length - 1] * 1.2], [BOX.top + BOX.height, BOX.top]);
  const panel = new Panel(x, y, BOX);
  const edge = (sorted: number[], i: number, lo: boolean): number => {
    if (lo) return i === 0 ? sorted[0] / 1.2 : Math.sqrt(sorted[i - 1] * sorted[i]);
    return i === sorted.length - 1 ? sorted[i] * 1.2 : Math.sqrt(sorted[i] * sorted[i + 1]);
  };
  for (const r of data) {
    const i = ns.indexOf(r.N);
    const j = gs.indexOf(r.g);
    panel.cell(edge(ns, i, true), edge(ns, i, false), edge(gs, j, true), edge(gs, j, false),
               heatColor(r.value));
  }
  panel.axes("N", "g / J");
  // collective-coupling guide g = sqrt(N): constant ultra-fast transmission
  const gx = ns.map((n) => n);
  panel.line(gx, gx.map((n) => Math.sqrt(n)), "#ffffff", "", 2.0);
  panel.label("g = sqrt(N) J", 0, "#ffffff");
  return { svg: document(W, H, "best transmission over detuning on the (g, N) grid", [panel]), fits: {} };
}

function fig2c(rows: Row[]): Rendered {
  const data = plottable(rows).filter((r) => r.observable_name === "max_T_ts");
  const series = collect(data, (r) => r.g / Math.sqrt(r.N), (r) => `N=${r.N}`);
  return lineFigure(
    "universal collapse against g / sqrt(N)",
    series,
    { xLabel: "g / sqrt(N) J", yLabel: "max T_ts", logX: true, logY: true },
    (panel, fits) => {
      const pooled: Series = {
        name: "pooled",
        xs: series.flatMap((s) => s.xs),
        ys: series.flatMap((s) => s.ys),
      };
      const order = pooled.xs.map((_, i) => i).sort((i, j) => pooled.xs[i] - pooled.xs[j]);
      pooled.xs = order.map((i) => pooled.xs[i]);
      pooled.ys = order.map((i) => pooled.ys[i]);
      guide(panel, fits, "weak-branch", pooled, (x) => x <= 0.25);
    },
  );
}

function fig2d(rows: Row[]): Rendered {
  return lineFigure(
    "polariton peak against cavity decay",
    collect(plottable(rows).filter((r) => r.observable_name === "T_ts"),
            (r) => r.Delta, (r) => `kappa=${r.kappa}`),
    { xLabel: "Delta / J", yLabel: "T_ts" },
  );
}

function fig3a(rows: Row[]): Rendered {
  // the cavity-free reference is the long-time weight; coupled series are
  // ultra-fast
  const data = plottable(rows).filter((r) =>
    (r.g === 0 && r.observable_name === "T_tl") ||
    (r.g > 0 && r.observable_name === "T_ts"));
  const series = collect(data, (r) => r.N, (r) => (r.g === 0 ? "g=0 (T_tl)" : `g=${r.g}`));
  return lineFigure(
    "disorder: exponential suppression against algebraic cavity transport",
    series,
    { xLabel: "N", yLabel: "T", logX: true, logY: true },
    (panel, fits) => {
      const ref = series.find((s) => s.name === "g=0.2");
      if (ref) guide(panel, fits, "1/N^2", ref, (x) => x >= 50);
    },
  );
}

function fig3b(rows: Row[]): Rendered {
  return lineFigure(
    "steady exciton current against pump rate",
    collect(plottable(rows).filter((r) => r.observable_name === "I_out"),
            (r) => r.gamma_P, (r) => `g=${r.g}`),
    { xLabel: "gamma_P / J", yLabel: "I_out", logX: true, logY: true },
  );
}

function fig3c(rows: Row[]): Rendered {
  const series = collect(plottable(rows).filter((r) => r.observable_name === "I_out"),
                         (r) => r.N, (r) => `g=${r.g}`);
  return lineFigure(
    "steady current against chain length",
    series,
    { xLabel: "N", yLabel: "I_out", logX: true, logY: true },
    (panel, fits) => {
      const ref = series.find((s) => s.name === "g=0.2");
      if (ref) guide(panel, fits, "1/N^2", ref);
    },
  );
}

function fig3d(rows: Row[]): Rendered {
  const data = plottable(rows).filter((r) => r.observable_name === "I_out");
  const n = data.length ? data[0].N : 50;
  return lineFigure(
    "crossover of the steady current with collective coupling",
    collect(data, (r) => r.g, (r) => `kappa=${r.kappa}`),
    { xLabel: "g / J", yLabel: "I_out", logX: true, logY: true },
    (panel) => {
      panel.vline(3 / Math.sqrt(n));
      panel.vline(10 / Math.sqrt(n));
      panel.label(`markers: g sqrt(N) = 3, 10 J`, 6, "#555");
    },
  );
}

function figS1(rows: Row[]): Rendered {
  const occ = plottable(rows).filter((r) => r.observable_name === "cavity_occupation" && r.t !== null);
  const tra = plottable(rows).filter((r) => r.observable_name === "transmission" && r.t !== null);
  const half = { ...BOX, height: (H - 110) / 2 };
  const lower = { ...half, top: BOX.top + half.height + 45 };
  const panels: Panel[] = [];
  for (const [data, box, ylabel] of [[occ, half, "photon occupation"],
                                     [tra, lower, "transmission"]] as const) {
    const series = collect(data, (r) => r.t!, (r) => `g=${r.g}`);
    const xs = series.flatMap((s) => s.xs);
    const ys = series.flatMap((s) => s.ys);
    const x = linearScale(extent(xs, false), [box.left, box.left + box.width]);
    const y = linearScale(extent(ys, false), [box.top + box.height, box.top]);
    const p = new Panel(x, y, box);
    p.axes("t J", ylabel);
    series.forEach((s, i) => {
      p.line(s.xs, s.ys, PALETTE[i % PALETTE.length]);
      p.label(s.name, i, PALETTE[i % PALETTE.length]);
    });
    panels.push(p);
  }
  return { svg: document(W, H + 60, "time evolution across coupling regimes", panels), fits: {} };
}

function figS2(rows: Row[]): Rendered {
  const data = plottable(rows);
  const names: [string, string[]][] = [
    ["peak width", ["fwhm_numeric", "fwhm_analytic", "fwhm_packet"]],
    ["peak height", ["peak_T"]],
    ["peak offset", ["peak_offset"]],
  ];
  const panels: Panel[] = [];
  const hEach = (H + 120 - 90) / 3;
  names.forEach(([ylabel, keys], k) => {
    const box = { ...BOX, height: hEach - 35, top: 30 + k * hEach };
    const series = collect(data, (r) => r.g, byObservable(keys));
    const xs = series.flatMap((s) => s.xs);
    const ys = series.flatMap((s) => s.ys);
    const x = logScale(extent(xs, true), [box.left, box.left + box.width]);
    const logY = ylabel !== "peak offset";
    const y = (logY ? logScale : linearScale)(extent(ys, logY), [box.top + box.height, box.top]);
    const p = new Panel(x, y, box);
    p.axes(k === 2 ? "g / J" : "", ylabel);
    series.forEach((s, i) => {
      p.line(s.xs, s.ys, PALETTE[i % PALETTE.length]);
      p.dots(s.xs, s.ys, PALETTE[i % PALETTE.length]);
      p.label(s.name, i, PALETTE[i % PALETTE.length]);
    });
    panels.push(p);
  });
  return { svg: document(W, H + 120, "numeric peak characterization", panels), fits: {} };
}

function figS3(rows: Row[]): Rendered {
  return lineFigure(
    "all-to-all segment: peak at the dominant collective eigenvalue",
    collect(plottable(rows), (r) => r.Delta, byObservable(["T_ts", "T_tl"])),
    { xLabel: "Delta / J", yLabel: "T" },
  );
}

function figA1(rows: Row[]): Rendered {
  const data = plottable(rows).filter((r) => r.observable_name.startsWith("T_tl_"));
  return lineFigure(
    "positional disorder: dipolar range against cavity protection",
    collect(data, (r) => r.N, (r) => r.observable_name.slice("T_tl_".length)),
    { xLabel: "N", yLabel: "T_tl", logX: true, logY: true },
  );
}

export const RECIPES: Record<string, (rows: Row[]) => Rendered> = {
  fig1b, fig2a, fig2b, fig2c, fig2d, fig3a, fig3b, fig3c, fig3d,
  figS1, figS2, figS3, figA1,
};
