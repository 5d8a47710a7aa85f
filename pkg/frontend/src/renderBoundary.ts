#!/usr/bin/env node
/** CLI: render a decision-boundary figure from a grid CSV and dataset CSV.
 *
 *   render-boundary --grid g.csv --data d.csv --out fig.png
 *                   [--title "..."] [--scheme default|ocean] [--size 480]
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { renderBoundaryPng } from "./boundary.js";

export function run(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      grid: { type: "string" },
      data: { type: "string" },
      out: { type: "string" },
      title: { type: "string" },
      scheme: { type: "string", default: "default" },
      size: { type: "string", default: "480" },
    },
  });
  if (!values.grid || !values.data || !values.out) {
    throw new Error("--grid, --data, and --out are required");
  }
  const png = renderBoundaryPng(
    readFileSync(values.grid, "utf8"),
    readFileSync(values.data, "utf8"),
    {
      title: values.title,
      scheme: values.scheme,
      targetSize: Number(values.size),
    },
  );
  writeFileSync(values.out, png);
  console.log(`wrote ${values.out} (${png.length} bytes)`);
  return 0;
}

const isMain = process.argv[1]?.endsWith("renderBoundary.js");
if (isMain) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}
