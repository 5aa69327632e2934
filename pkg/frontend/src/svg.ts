/** Minimal SVG scene assembly: linear scales, axes, polylines, labels. */

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[]): Extent {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  if (min === max) {
    min -= 0.5;
    max += 0.5;
  }
  return { min, max };
}

export function scale(domain: Extent, range: [number, number]) {
  const k = (range[1] - range[0]) / (domain.max - domain.min);
  return (v: number) => range[0] + (v - domain.min) * k;
}

export function ticks(domain: Extent, count: number): number[] {
  const span = domain.max - domain.min;
  const rawStep = span / Math.max(count, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const out: number[] = [];
  for (
    let v = Math.ceil(domain.min / step) * step;
    v <= domain.max + 1e-12 * span;
    v += step
  ) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export class Svg {
  private parts: string[] = [];

  constructor(
    readonly width: number,
    readonly height: number,
  ) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke = "#333", w = 1) {
    this.parts.push(
      `<line x1="${x1.toFixed(2)}" y1="${y1.toFixed(2)}" x2="${x2.toFixed(2)}" ` +
        `y2="${y2.toFixed(2)}" stroke="${stroke}" stroke-width="${w}"/>`,
    );
  }

  polyline(points: [number, number][], stroke: string) {
    const attr = points
      .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`)
      .join(" ");
    this.parts.push(
      `<polyline points="${attr}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string) {
    this.parts.push(
      `<circle cx="${x.toFixed(2)}" cy="${y.toFixed(2)}" r="${r}" fill="${fill}"/>`,
    );
  }

  text(x: number, y: number, content: string, opts: {
    anchor?: string;
    size?: number;
    fill?: string;
  } = {}) {
    const { anchor = "start", size = 11, fill = "#222" } = opts;
    this.parts.push(
      `<text x="${x.toFixed(2)}" y="${y.toFixed(2)}" text-anchor="${anchor}" ` +
        `font-size="${size}" font-family="sans-serif" fill="${fill}">` +
        `${esc(content)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">` +
      `<rect width="100%" height="100%" fill="white"/>` +
      this.parts.join("") +
      `</svg>`
    );
  }
}
