/** The log-log convergence figure: one curve per c, fitted slopes annotated. */

import { groupByC, parseConvergenceCsv, StudyRow } from "./csv.js";
import { fittedOrder } from "./slope.js";
import { extentOf, PALETTE, scale, Svg, ticks } from "./svg.js";

export interface ConvergenceFigure {
  svg: string;
  /** c value -> annotated least-squares slope */
  slopes: Map<number, number>;
}

const LOG10 = Math.log(10);
const log10 = (v: number) => Math.log(v) / LOG10;

export function buildConvergenceFigure(csvText: string): ConvergenceFigure {
  const rows = parseConvergenceCsv(csvText);
  const groups = groupByC(rows);

  const slopes = new Map<number, number>();
  for (const [c, bucket] of groups) {
    slopes.set(
      c,
      fittedOrder(
        bucket.map((r) => r.s),
        bucket.map((r) => r.error),
      ),
    );
  }

  const width = 560;
  const height = 420;
  const margin = { left: 64, right: 160, top: 28, bottom: 48 };
  const xs = rows.map((r) => log10(r.s));
  const ys = rows.map((r) => log10(r.error));
  const xd = padded(extentOf(xs));
  const yd = padded(extentOf(ys));
  const sx = scale(xd, [margin.left, width - margin.right]);
  const sy = scale(yd, [height - margin.bottom, margin.top]);

  const fig = new Svg(width, height);
  drawAxes(fig, xd, yd, sx, sy, width, height, margin);

  let k = 0;
  for (const [c, bucket] of groups) {
    const color = PALETTE[k % PALETTE.length];
    const pts: [number, number][] = bucket.map((r) => [
      sx(log10(r.s)),
      sy(log10(r.error)),
    ]);
    fig.polyline(pts, color);
    for (const [x, y] of pts) {
      fig.circle(x, y, 2.6, color);
    }
    const slope = slopes.get(c)!;
    const label = `c=${formatC(c)}  slope ${slope.toFixed(3)}`;
    fig.text(width - margin.right + 10, margin.top + 16 + 18 * k, label, {
      fill: color,
    });
    k += 1;
  }

  const first = rows[0];
  fig.text(width / 2, 16, `${first.scheme}, ${first.bc}`, {
    anchor: "middle",
    size: 13,
  });
  return { svg: fig.render(), slopes };
}

function padded(e: { min: number; max: number }) {
  const pad = 0.06 * (e.max - e.min);
  return { min: e.min - pad, max: e.max + pad };
}

function drawAxes(
  fig: Svg,
  xd: { min: number; max: number },
  yd: { min: number; max: number },
  sx: (v: number) => number,
  sy: (v: number) => number,
  width: number,
  height: number,
  margin: { left: number; right: number; top: number; bottom: number },
) {
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  fig.line(x0, y0, x1, y0);
  fig.line(x0, y0, x0, y1);
  for (const t of ticks(xd, 6)) {
    fig.line(sx(t), y0, sx(t), y0 + 4);
    fig.text(sx(t), y0 + 16, t.toFixed(2), { anchor: "middle", size: 10 });
  }
  for (const t of ticks(yd, 6)) {
    fig.line(x0 - 4, sy(t), x0, sy(t));
    fig.text(x0 - 7, sy(t) + 3, t.toFixed(1), { anchor: "end", size: 10 });
  }
  fig.text((x0 + x1) / 2, height - 12, "log10(s)", {
    anchor: "middle",
    size: 12,
  });
  fig.text(14, (y0 + y1) / 2, "log10 ||E||", { anchor: "middle", size: 12 });
}

function formatC(c: number): string {
  // recover the common rational c values for readable legends
  const known: [number, string][] = [
    [-0.25, "-1/4"],
    [4 / 13, "4/13"],
    [1 / 6, "1/6"],
    [-1 / 6, "-1/6"],
  ];
  for (const [v, s] of known) {
    if (Math.abs(c - v) < 1e-12) return s;
  }
  return String(c);
}

/** Consistency gate: annotated slopes against the CSV's own pairwise
 * observed_order column.  On a grid-halving ladder the least-squares
 * slope equals the mean of the pairwise orders, so the two must agree
 * to tight tolerance. */
export function verifySlopesAgainstColumn(
  csvText: string,
  tolerance = 1e-3,
): void {
  const groups = groupByC(parseConvergenceCsv(csvText));
  for (const [c, bucket] of groups) {
    const pairwise = bucket
      .map((r: StudyRow) => r.observedOrder)
      .filter((v): v is number => v !== null);
    if (pairwise.length === 0) continue;
    const mean = pairwise.reduce((a, b) => a + b, 0) / pairwise.length;
    const slope = fittedOrder(
      bucket.map((r) => r.s),
      bucket.map((r) => r.error),
    );
    if (Math.abs(slope - mean) > tolerance) {
      throw new Error(
        `slope annotation ${slope.toFixed(6)} disagrees with the ` +
          `observed_order column (mean ${mean.toFixed(6)}) for c=${c}`,
      );
    }
  }
}
