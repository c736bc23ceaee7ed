#!/usr/bin/env node
/** Command line: plots <kind> --in <csv> --out <img>
 *
 * Exit codes: 0 success, 2 usage or schema error, 3 file system error.
 */

import { pathToFileURL } from "node:url";

import { SchemaError } from "./csv.js";
import { PLOT_KINDS, renderToFile, type PlotKind, type PlotSpec } from "./plots.js";

const USAGE = `usage: plots <kind> --in <csv> --out <img> [options]

kinds: ${PLOT_KINDS.join(", ")}

options:
  --in <path>     input CSV (required)
  --out <path>    output SVG (required)
  --linear-y      linear value axis instead of log
  --no-markers    omit the 2D/3D/4D markers on the regime map
  --help          show this message
`;

export function main(argv: string[]): number {
  if (argv.length === 0 || argv.includes("--help")) {
    process.stdout.write(USAGE);
    return argv.length === 0 ? 2 : 0;
  }
  const kind = argv[0] as string;
  if (!PLOT_KINDS.includes(kind as PlotKind)) {
    process.stderr.write(`unknown plot kind: ${kind}\n${USAGE}`);
    return 2;
  }
  let input: string | undefined;
  let output: string | undefined;
  let logY = true;
  let dimensionMarkers = true;
  const rest = argv.slice(1);
  for (let i = 0; i < rest.length; i++) {
    const arg = rest[i] as string;
    if (arg === "--in") {
      input = rest[++i];
    } else if (arg === "--out") {
      output = rest[++i];
    } else if (arg === "--linear-y") {
      logY = false;
    } else if (arg === "--no-markers") {
      dimensionMarkers = false;
    } else {
      process.stderr.write(`unknown option: ${arg}\n${USAGE}`);
      return 2;
    }
  }
  if (input === undefined || output === undefined) {
    process.stderr.write(`--in and --out are required\n${USAGE}`);
    return 2;
  }
  const spec: PlotSpec = {
    kind: kind as PlotKind,
    inputCsv: input,
    output,
    logY,
    dimensionMarkers,
  };
  try {
    renderToFile(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      process.stderr.write(`file error: ${err.message}\n`);
      return 3;
    }
    throw err;
  }
  process.stdout.write(`${spec.kind}: ${input} -> ${output}\n`);
  return 0;
}

const invoked = process.argv[1];
if (invoked !== undefined && import.meta.url === pathToFileURL(invoked).href) {
  process.exit(main(process.argv.slice(2)));
}
