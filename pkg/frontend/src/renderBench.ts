#!/usr/bin/env node
/** CLI: render the benchmark accuracy table from a bench results CSV.
 *
 *   render-bench --bench results.csv --out table.png   (bitmap table)
 *   render-bench --bench results.csv --out table.md    (markdown table)
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import {
  benchTableMarkdown,
  parseBenchCsv,
  renderBenchTablePng,
} from "./benchTable.js";

export function run(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      bench: { type: "string" },
      out: { type: "string" },
      scheme: { type: "string", default: "default" },
    },
  });
  if (!values.bench || !values.out) {
    throw new Error("--bench and --out are required");
  }
  const pivot = parseBenchCsv(readFileSync(values.bench, "utf8"));
  if (values.out.endsWith(".md")) {
    writeFileSync(values.out, benchTableMarkdown(pivot));
  } else {
    writeFileSync(values.out, renderBenchTablePng(pivot, values.scheme));
  }
  console.log(
    `wrote ${values.out} (${pivot.models.length}x${pivot.datasets.length} table)`,
  );
  return 0;
}

const isMain = process.argv[1]?.endsWith("renderBench.js");
if (isMain) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
}
