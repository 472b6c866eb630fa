#!/usr/bin/env node
/** Figure CLI: render one figure from a spec JSON or from flags.
 *
 *   xrsim-figures --spec figure.json
 *   xrsim-figures --kind mse_curves --input sweep_points.csv \
 *       --crossover crossover.json --thresholds 0.02,0.035,0.04 --out fig.svg
 */

import { readFileSync } from "fs";
import { renderToFile } from "./render.js";
import { FIGURE_KINDS, FigureError } from "./types.js";

function parseArgs(argv: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) throw new FigureError(`unexpected argument ${arg}`);
    const key = arg.slice(2);
    const val = argv[i + 1];
    if (val === undefined || val.startsWith("--")) throw new FigureError(`missing value for --${key}`);
    out[key] = val;
    i++;
  }
  return out;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    let spec: unknown;
    if (args.spec) {
      spec = JSON.parse(readFileSync(args.spec, "utf-8"));
    } else {
      if (!args.kind || !args.input || !args.out) {
        throw new FigureError(
          `need --spec or (--kind <${FIGURE_KINDS.join("|")}> --input <csv> --out <svg>)`,
        );
      }
      spec = {
        kind: args.kind,
        input: args.input,
        output: args.out,
        crossover: args.crossover,
        thresholds: args.thresholds ? args.thresholds.split(",").map(Number) : [],
        policy: args.policy,
        format: args.format ?? "svg",
        title: args.title,
      };
    }
    const path = renderToFile(spec);
    console.log(`wrote ${path}`);
    return 0;
  } catch (e) {
    if (e instanceof FigureError || e instanceof SyntaxError) {
      console.error(`error: ${(e as Error).message}`);
      return 1;
    }
    console.error(`error: ${(e as Error).stack}`);
    return 2;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
