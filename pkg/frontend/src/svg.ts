/**
 * Minimal deterministic SVG plotting: linear/log scales, axes with ticks,
 * polylines, rect heat cells. All coordinates go through a fixed-precision
 * formatter so the same data always produces byte-identical files.
 */

export const fmt = (v: number): string => {
  if (!Number.isFinite(v)) return "0";
  const s = v.toPrecision(6);
  return s.includes("e") ? Number(s).toExponential(4) : String(Number(s));
};

export interface Scale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
  ticks(): number[];
}

function makeScale(domain: [number, number], range: [number, number], log: boolean): Scale {
  const [d0, d1] = log ? [Math.log10(domain[0]), Math.log10(domain[1])] : domain;
  const span = d1 - d0 || 1;
  const f = ((v: number) => {
    const t = ((log ? Math.log10(v) : v) - d0) / span;
    return range[0] + t * (range[1] - range[0]);
  }) as Scale;
  f.domain = domain;
  f.range = range;
  f.log = log;
  f.ticks = () => (log ? logTicks(domain) : linTicks(domain));
  return f;
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  if (domain[0] === domain[1]) domain = [domain[0] - 1, domain[1] + 1];
  return makeScale(domain, range, false);
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  if (domain[0] <= 0) throw new Error("log scale needs a positive domain");
  if (domain[0] === domain[1]) domain = [domain[0] / 2, domain[1] * 2];
  return makeScale(domain, range, true);
}

function linTicks([a, b]: [number, number]): number[] {
  const raw = (b - a) / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (b - a) / s <= 6)!;
  const out: number[] = [];
  for (let v = Math.ceil(a / step) * step; v <= b + 1e-9 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

function logTicks([a, b]: [number, number]): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(a) - 1e-9); Math.pow(10, e) <= b * (1 + 1e-9); e++) {
    out.push(Math.pow(10, e));
  }
  if (out.length < 2) return [a, b];
  return out;
}

const tickLabel = (v: number, log: boolean): string => {
  if (log) {
    const e = Math.round(Math.log10(v));
    return Math.abs(e) > 3 ? `1e${e}` : String(Math.pow(10, e));
  }
  return fmt(v);
};

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f",
];

export class Panel {
  parts: string[] = [];

  constructor(
    public x: Scale,
    public y: Scale,
    public box: { left: number; top: number; width: number; height: number },
  ) {}

  axes(xlabel: string, ylabel: string): void {
    const { left, top, width, height } = this.box;
    const b = `M${fmt(left)},${fmt(top)} H${fmt(left + width)} V${fmt(top + height)} H${fmt(left)} Z`;
    this.parts.push(`<path d="${b}" fill="none" stroke="#000" stroke-width="1"/>`);
    for (const t of this.x.ticks()) {
      const px = this.x(t);
      if (px < left - 0.5 || px > left + width + 0.5) continue;
      this.parts.push(`<line x1="${fmt(px)}" y1="${fmt(top + height)}" x2="${fmt(px)}" y2="${fmt(top + height - 4)}" stroke="#000"/>`);
      this.parts.push(`<text x="${fmt(px)}" y="${fmt(top + height + 14)}" text-anchor="middle" font-size="10">${tickLabel(t, this.x.log)}</text>`);
    }
    for (const t of this.y.ticks()) {
      const py = this.y(t);
      if (py < top - 0.5 || py > top + height + 0.5) continue;
      this.parts.push(`<line x1="${fmt(left)}" y1="${fmt(py)}" x2="${fmt(left + 4)}" y2="${fmt(py)}" stroke="#000"/>`);
      this.parts.push(`<text x="${fmt(left - 4)}" y="${fmt(py + 3)}" text-anchor="end" font-size="10">${tickLabel(t, this.y.log)}</text>`);
    }
    this.parts.push(`<text x="${fmt(left + width / 2)}" y="${fmt(top + height + 30)}" text-anchor="middle" font-size="11">${xlabel}</text>`);
    this.parts.push(`<text x="${fmt(left - 44)}" y="${fmt(top + height / 2)}" text-anchor="middle" font-size="11" transform="rotate(-90 ${fmt(left - 44)} ${fmt(top + height / 2)})">${ylabel}</text>`);
  }

  clipped(px: number, py: number): boolean {
    const { left, top, width, height } = this.box;
    return px < left - 0.5 || px > left + width + 0.5 || py < top - 0.5 || py > top + height + 0.5;
  }

  line(xs: number[], ys: number[], color: string, dash = "", width = 1.5): void {
    let d = "";
    let pen = false;
    for (let i = 0; i < xs.length; i++) {
      if (this.y.log && ys[i] <= 0) {
        pen = false;
        continue;
      }
      const px = this.x(xs[i]);
      const py = this.y(ys[i]);
      if (this.clipped(px, py)) {
        pen = false;
        continue;
      }
      d += `${pen ? "L" : "M"}${fmt(px)},${fmt(py)}`;
      pen = true;
    }
    if (!d) return;
    const dd = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(`<path d="${d}" fill="none" stroke="${color}" stroke-width="${width}"${dd}/>`);
  }

  dots(xs: number[], ys: number[], color: string, r = 2.4): void {
    for (let i = 0; i < xs.length; i++) {
      if (this.y.log && ys[i] <= 0) continue;
      const px = this.x(xs[i]);
      const py = this.y(ys[i]);
      if (this.clipped(px, py)) continue;
      this.parts.push(`<circle cx="${fmt(px)}" cy="${fmt(py)}" r="${r}" fill="${color}"/>`);
    }
  }

  vline(x: number, color = "#555"): void {
    const px = this.x(x);
    if (px < this.box.left || px > this.box.left + this.box.width) return;
    this.parts.push(`<line x1="${fmt(px)}" y1="${fmt(this.box.top)}" x2="${fmt(px)}" y2="${fmt(this.box.top + this.box.height)}" stroke="${color}" stroke-dasharray="3,3"/>`);
  }

  cell(x0: number, x1: number, y0: number, y1: number, color: string): void {
    const px0 = this.x(x0);
    const px1 = this.x(x1);
    const py0 = this.y(y0);
    const py1 = this.y(y1);
    this.parts.push(`<rect x="${fmt(Math.min(px0, px1))}" y="${fmt(Math.min(py0, py1))}" width="${fmt(Math.abs(px1 - px0))}" height="${fmt(Math.abs(py1 - py0))}" fill="${color}"/>`);
  }

  label(text: string, slot: number, color: string): void {
    const x = this.box.left + 8;
    const y = this.box.top + 14 + slot * 13;
    this.parts.push(`<text x="${fmt(x)}" y="${fmt(y)}" font-size="10" fill="${color}">${text}</text>`);
  }
}

export function document(width: number, height: number, title: string, panels: Panel[]): string {
  const body = panels.map((p) => p.parts.join("\n")).join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="Helvetica,Arial,sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
    `<text x="${width / 2}" y="16" text-anchor="middle" font-size="12" font-weight="bold">${title}</text>`,
    body,
    `</svg>`,
    ``,
  ].join("\n");
}

/** Perceptually reasonable dark-to-bright map for the heat panel. */
export function heatColor(t: number): string {
  const c = Math.max(0, Math.min(1, t));
  const r = Math.round(20 + 235 * Math.pow(c, 0.7));
  const g = Math.round(12 + 160 * Math.pow(c, 1.4));
  const b = Math.round(60 + 120 * Math.pow(1 - c, 1.1));
  return `rgb(${r},${g},${b})`;
}
