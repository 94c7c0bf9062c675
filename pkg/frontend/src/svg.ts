/** Minimal SVG document builder: axes, polylines, rect cells, text. */

export interface Extent {
  min: number;
  max: number;
}

export function extent(values: number[]): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      if (v < min) min = v;
      if (v > max) max = v;
    }
  }
  if (!(min <= max)) throw new Error("no finite values to plot");
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  return { min, max };
}

export class SvgCanvas {
  readonly width: number;
  readonly height: number;
  readonly margin = { left: 64, right: 16, top: 28, bottom: 44 };
  private parts: string[] = [];

  constructor(width = 640, height = 420) {
    this.width = width;
    this.height = height;
  }

  get plotWidth(): number {
    return this.width - this.margin.left - this.margin.right;
  }

  get plotHeight(): number {
    return this.height - this.margin.top - this.margin.bottom;
  }

  xPix(t: number): number {
    return this.margin.left + t * this.plotWidth;
  }

  yPix(t: number): number {
    return this.margin.top + (1 - t) * this.plotHeight;
  }

  add(fragment: string): void {
    this.parts.push(fragment);
  }

  polyline(pts: Array<[number, number]>, color: string, width = 1.5): void {
    const d = pts
      .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
      .join(" ");
    this.add(
      `<polyline fill="none" stroke="${color}" stroke-width="${width}" points="${d}"/>`,
    );
  }

  circle(x: number, y: number, r: number, color: string): void {
    this.add(
      `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="${r}" fill="${color}"/>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, color: string): void {
    this.add(
      `<rect x="${x.toFixed(2)}" y="${y.toFixed(2)}" width="${w.toFixed(2)}" ` +
        `height="${h.toFixed(2)}" fill="${color}"/>`,
    );
  }

  text(x: number, y: number, s: string, opts = ""): void {
    this.add(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" font-family="sans-serif" ` +
        `font-size="12" ${opts}>${escapeXml(s)}</text>`,
    );
  }

  axes(xLabel: string, yLabel: string, xt: Array<[number, string]>, yt: Array<[number, string]>): void {
    const x0 = this.margin.left;
    const y0 = this.margin.top + this.plotHeight;
    const x1 = this.margin.left + this.plotWidth;
    const y1 = this.margin.top;
    this.add(
      `<path d="M ${x0} ${y1} L ${x0} ${y0} L ${x1} ${y0}" stroke="black" fill="none"/>`,
    );
    for (const [t, label] of xt) {
      const px = this.xPix(t);
      this.add(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y0 + 5}" stroke="black"/>`);
      this.text(px - 14, y0 + 18, label);
    }
    for (const [t, label] of yt) {
      const py = this.yPix(t);
      this.add(`<line x1="${x0 - 5}" y1="${py}" x2="${x0}" y2="${py}" stroke="black"/>`);
      this.text(6, py + 4, label);
    }
    this.text(x0 + this.plotWidth / 2 - 20, this.height - 8, xLabel);
    this.text(8, 16, yLabel);
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="100%" height="100%" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Blue-to-red diverging map on [-1, 1]. */
export function divergingColor(t: number): string {
  const c = Math.max(-1, Math.min(1, t));
  const r = Math.round(c > 0 ? 255 : 255 * (1 + c));
  const b = Math.round(c < 0 ? 255 : 255 * (1 - c));
  const g = Math.round(255 * (1 - Math.abs(c)));
  return `rgb(${r},${g},${b})`;
}
