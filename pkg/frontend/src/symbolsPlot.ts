/** Symbol curves Q1/Q2 against frequency and the coefficient-block
 * determinant against omega*h, from the analyze JSON output. */

import { extentOf, PALETTE, scale, Svg, ticks } from "./svg.js";

interface SymbolRecord {
  omega: number;
  q1: [number, number];
  q2: [number, number];
  det: number;
  omega_h: number;
}

export interface AnalysisDocument {
  N: number;
  c: number;
  h: number;
  s: number;
  symbols: SymbolRecord[];
  det_min: number;
  verdict: string;
}

export function parseAnalysis(text: string): AnalysisDocument {
  let doc: unknown;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new Error(`not valid JSON: ${(err as Error).message}`);
  }
  const d = doc as AnalysisDocument;
  if (
    typeof d !== "object" ||
    d === null ||
    !Array.isArray(d.symbols) ||
    typeof d.N !== "number" ||
    typeof d.c !== "number"
  ) {
    throw new Error("JSON lacks the analyze-output fields (N, c, symbols)");
  }
  for (const rec of d.symbols) {
    if (
      typeof rec.omega !== "number" ||
      !Array.isArray(rec.q1) ||
      !Array.isArray(rec.q2)
    ) {
      throw new Error("malformed symbol record in analyze output");
    }
  }
  return d;
}

export function buildSymbolsFigure(jsonText: string): string {
  const doc = parseAnalysis(jsonText);
  const width = 600;
  const height = 640;
  const fig = new Svg(width, height);
  fig.text(width / 2, 16, `symbols and determinant, N=${doc.N}, c=${doc.c}`, {
    anchor: "middle",
    size: 13,
  });

  // top panel: Q1 and Q2 vs omega
  const top = { left: 70, right: 24, top: 30, bottom: 370 };
  const omegas = doc.symbols.map((r) => r.omega);
  const q1 = doc.symbols.map((r) => r.q1[0]);
  const q2 = doc.symbols.map((r) => r.q2[0]);
  const xd = extentOf(omegas);
  const yd = extentOf([...q1, ...q2, 0]);
  const sx = scale(xd, [top.left, width - top.right]);
  const sy = scale(yd, [height - top.bottom, top.top]);
  fig.line(top.left, height - top.bottom, width - top.right, height - top.bottom);
  fig.line(top.left, height - top.bottom, top.left, top.top);
  for (const t of ticks(xd, 6)) {
    fig.text(sx(t), height - top.bottom + 14, String(t), {
      anchor: "middle",
      size: 10,
    });
  }
  for (const t of ticks(yd, 5)) {
    fig.text(top.left - 6, sy(t) + 3, t.toFixed(0), { anchor: "end", size: 10 });
  }
  fig.polyline(omegas.map((w, i) => [sx(w), sy(q1[i])]), PALETTE[0]);
  fig.polyline(omegas.map((w, i) => [sx(w), sy(q2[i])]), PALETTE[1]);
  fig.text(width - 150, top.top + 12, "physical branch", { fill: PALETTE[0] });
  fig.text(width - 150, top.top + 28, "parasitic branch", { fill: PALETTE[1] });
  fig.text(width / 2, height - top.bottom + 30, "frequency", {
    anchor: "middle",
    size: 12,
  });

  // bottom panel: determinant vs omega*h
  const bot = { left: 70, right: 24, top: 330, bottom: 40 };
  const wh = doc.symbols.map((r) => r.omega_h);
  const det = doc.symbols.map((r) => r.det);
  const xd2 = extentOf(wh);
  const yd2 = extentOf([...det, 0.88, 1.0]);
  const sx2 = scale(xd2, [bot.left, width - bot.right]);
  const sy2 = scale(yd2, [height - bot.bottom, bot.top]);
  fig.line(bot.left, height - bot.bottom, width - bot.right, height - bot.bottom);
  fig.line(bot.left, height - bot.bottom, bot.left, bot.top);
  for (const t of ticks(xd2, 6)) {
    fig.text(sx2(t), height - bot.bottom + 14, t.toFixed(1), {
      anchor: "middle",
      size: 10,
    });
  }
  for (const t of ticks(yd2, 5)) {
    fig.text(bot.left - 6, sy2(t) + 3, t.toFixed(2), { anchor: "end", size: 10 });
  }
  fig.polyline(wh.map((w, i) => [sx2(w), sy2(det[i])]), PALETTE[2]);
  fig.line(sx2(xd2.min), sy2(0.9), sx2(xd2.max), sy2(0.9), "#aaa");
  fig.text(width - 170, bot.top + 14, `det, min ${doc.det_min.toFixed(4)}`, {
    fill: PALETTE[2],
  });
  fig.text(width / 2, height - 8, "omega * h", { anchor: "middle", size: 12 });
  return fig.render();
}
