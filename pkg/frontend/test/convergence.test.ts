import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { groupByC, parseConvergenceCsv } from "../src/csv.js";
import {
  buildConvergenceFigure,
  verifySlopesAgainstColumn,
} from "../src/convergencePlot.js";
import { fittedOrder, leastSquaresSlope } from "../src/slope.js";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = readFileSync(
  join(here, "fixtures", "dirichlet_study.csv"),
  "utf8",
);

describe("csv parsing", () => {
  it("reads the published schema", () => {
    const rows = parseConvergenceCsv(fixture);
    expect(rows).toHaveLength(12);
    expect(rows[0].scheme).toBe("second-block");
    expect(rows[0].bc).toBe("dirichlet");
    expect(rows[0].observedOrder).toBeNull();
    expect(groupByC(rows).size).toBe(4);
  });

  it("rejects empty input", () => {
    expect(() => parseConvergenceCsv("")).toThrow(/empty/);
    expect(() => parseConvergenceCsv("scheme,bc,c,N,s,error,observed_order"))
      .toThrow(/no data rows/);
  });

  it("rejects a wrong header or malformed rows", () => {
    expect(() => parseConvergenceCsv("a,b,c\n1,2,3")).toThrow(/header/);
    const bad = fixture.replace("second-block,dirichlet,0.0,32", "oops,row");
    expect(() => parseConvergenceCsv(bad)).toThrow(/malformed|non-numeric/);
  });
});

describe("slope fitting", () => {
  it("recovers exact ladders", () => {
    expect(
      fittedOrder([0.1, 0.05, 0.025], [1e-2, 1.25e-3, 1.5625e-4]),
    ).toBeCloseTo(3.0, 12);
    expect(leastSquaresSlope([0, 1, 2], [5, 5, 5])).toBeCloseTo(0, 12);
  });

  it("requires two points", () => {
    expect(() => leastSquaresSlope([1], [1])).toThrow();
  });
});

describe("convergence figure", () => {
  it("draws one curve per c with slope annotations", () => {
    const { svg, slopes } = buildConvergenceFigure(fixture);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(4);
    expect(slopes.size).toBe(4);
    const inhibiting = slopes.get(-0.25)!;
    expect(inhibiting).toBeGreaterThan(2.7);
    expect(inhibiting).toBeLessThan(3.3);
    expect(svg).toContain(`slope ${inhibiting.toFixed(3)}`);
    expect(svg).toContain("c=-1/4");
  });

  it("annotated slopes match the CSV observed_order column to 1e-3", () => {
    const { slopes } = buildConvergenceFigure(fixture);
    const groups = groupByC(parseConvergenceCsv(fixture));
    for (const [c, bucket] of groups) {
      const pairwise = bucket
        .map((r) => r.observedOrder)
        .filter((v): v is number => v !== null);
      const mean = pairwise.reduce((a, b) => a + b, 0) / pairwise.length;
      expect(Math.abs(slopes.get(c)! - mean)).toBeLessThan(1e-3);
    }
    expect(() => verifySlopesAgainstColumn(fixture)).not.toThrow();
  });

  it("verification rejects a tampered order column", () => {
    const tampered = fixture.replace(/,2\.\d{6}$/m, ",9.000000");
    expect(() => verifySlopesAgainstColumn(tampered)).toThrow(/disagrees/);
  });

  it("renders a single-group CSV as one curve", () => {
    const rows = parseConvergenceCsv(fixture).filter((r) => r.c === -0.25);
    const lines = [
      "scheme,bc,c,N,s,error,observed_order",
      ...rows.map(
        (r, i) =>
          `${r.scheme},${r.bc},${r.c},${r.N},${r.s},${r.error},` +
          (i === 0 ? "" : r.observedOrder!.toFixed(6)),
      ),
    ].join("\n");
    const { svg, slopes } = buildConvergenceFigure(lines);
    expect((svg.match(/<polyline/g) ?? []).length).toBe(1);
    expect(slopes.size).toBe(1);
  });
});
