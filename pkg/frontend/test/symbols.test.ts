import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { buildSymbolsFigure, parseAnalysis } from "../src/symbolsPlot.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = readFileSync(join(here, "fixtures", "analysis.json"), "utf8");

describe("analysis parsing", () => {
  it("reads the analyze output", () => {
    const doc = parseAnalysis(fixture);
    expect(doc.N).toBe(16);
    expect(doc.c).toBeCloseTo(-0.25, 12);
    expect(doc.symbols.length).toBe(9);
    expect(doc.verdict).toBe("stable");
  });

  it("rejects malformed JSON and missing fields", () => {
    expect(() => parseAnalysis("{nope")).toThrow(/not valid JSON/);
    expect(() => parseAnalysis('{"N": 4}')).toThrow(/analyze-output/);
    expect(() => parseAnalysis('{"N": 4, "c": 0, "symbols": [{}]}')).toThrow(
      /malformed symbol record/,
    );
  });
});

describe("symbols figure", () => {
  it("draws both branches and the determinant window", () => {
    const svg = buildSymbolsFigure(fixture);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(3);
    expect(svg).toContain("physical branch");
    expect(svg).toContain("parasitic branch");
    const doc = parseAnalysis(fixture);
    // the inhibiting c sits inside the determinant window
    expect(doc.det_min).toBeGreaterThan(0.9);
    expect(svg).toContain(doc.det_min.toFixed(4));
  });

  it("c=0 branches equal the decoupled-stencil closed forms", () => {
    const text = readFileSync(
      join(here, "fixtures", "analysis_c0.json"),
      "utf8",
    );
    const doc = parseAnalysis(text);
    const s = doc.s;
    for (const rec of doc.symbols) {
      const phase = (rec.omega * doc.h) / 4;
      const q1 = (-4 * Math.sin(phase) ** 2) / (s * s);
      const q2 = (-4 * Math.cos(phase) ** 2) / (s * s);
      expect(rec.q1[0]).toBeCloseTo(q1, 7);
      expect(rec.q2[0]).toBeCloseTo(q2, 7);
    }
    expect(buildSymbolsFigure(text)).toContain("<svg");
  });
});
