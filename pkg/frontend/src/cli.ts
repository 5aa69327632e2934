#!/usr/bin/env node
/** blockfd-plots: render convergence and symbol figures from CLI outputs.
 *
 * Usage:
 *   plot-convergence <study.csv> <out.svg>
 *   plot-symbols <analysis.json> <out.svg>
 *
 * Exits nonzero on schema mismatches or empty inputs.
 */

import { readFileSync, writeFileSync } from "node:fs";

import {
  buildConvergenceFigure,
  verifySlopesAgainstColumn,
} from "./convergencePlot.js";
import { buildSymbolsFigure } from "./symbolsPlot.js";

export function main(argv: string[]): number {
  const [command, input, output] = argv;
  if (!command || !input || !output) {
    console.error(
      "usage: plot-convergence <study.csv> <out.svg> | " +
        "plot-symbols <analysis.json> <out.svg>",
    );
    return 2;
  }
  let text: string;
  try {
    text = readFileSync(input, "utf8");
  } catch (err) {
    console.error(`cannot read ${input}: ${(err as Error).message}`);
    return 1;
  }
  try {
    if (command === "plot-convergence") {
      verifySlopesAgainstColumn(text);
      const figure = buildConvergenceFigure(text);
      writeFileSync(output, figure.svg);
      for (const [c, slope] of figure.slopes) {
        console.log(`c=${c}: fitted slope ${slope.toFixed(3)}`);
      }
    } else if (command === "plot-symbols") {
      writeFileSync(output, buildSymbolsFigure(text));
    } else {
      console.error(`unknown command ${command}`);
      return 2;
    }
  } catch (err) {
    console.error((err as Error).message);
    return 1;
  }
  console.log(`wrote ${output}`);
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
