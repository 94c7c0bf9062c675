/** flatwave-plots: render a diagnostics CSV into an SVG figure.
 *
 * Usage: flatwave-plots --kind trace|loglog_fit|heatmap --input file.csv
 *        --output file.svg [--value-column name]
 */

import * as fs from "node:fs";
import { CsvError } from "./csv.js";
import { PlotKind, PlotSpec, render } from "./plots.js";

function parseArgs(argv: string[]): { kind: PlotKind; input: string; output: string; valueColumn?: string } {
  const out: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const val = argv[i + 1];
    if (!key.startsWith("--") || val === undefined) {
      throw new Error(`bad argument pair near '${key}'`);
    }
    out[key.slice(2)] = val;
  }
  for (const required of ["kind", "input", "output"]) {
    if (!(required in out)) throw new Error(`missing --${required}`);
  }
  if (!["trace", "loglog_fit", "heatmap"].includes(out["kind"])) {
    throw new Error(`unknown kind '${out["kind"]}'`);
  }
  return {
    kind: out["kind"] as PlotKind,
    input: out["input"],
    output: out["output"],
    valueColumn: out["value-column"],
  };
}

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err));
    return 2;
  }
  let text: string;
  try {
    text = fs.readFileSync(args.input, "utf8");
  } catch {
    console.error(`cannot read input '${args.input}'`);
    return 2;
  }
  const spec: PlotSpec = {
    kind: args.kind,
    inputText: text,
    valueColumn: args.valueColumn,
  };
  try {
    const result = render(spec);
    fs.writeFileSync(args.output, result.svg);
    for (const [name, fit] of result.slopes) {
      console.log(`${name}: slope ${fit.slope} stderr ${fit.stderr}`);
    }
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`csv error: ${err.message}`);
      return 3;
    }
    throw err;
  }
  console.log(`wrote ${args.output}`);
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
