/** Minimal CSV handling for the documented qksvm file schemas. */

export interface CsvTable {
  header: string[];
  rows: string[][];
}

/** Parse simple comma-separated text (no quoting in the documented formats). */
export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

/**
 * Validate that every required column is present and return its index.
 * The error names the first missing column so callers can surface it.
 */
export function columnIndices(
  table: CsvTable,
  required: string[],
  what: string,
): Map<string, number> {
  const indices = new Map<string, number>();
  for (const name of required) {
    const idx = table.header.indexOf(name);
    if (idx < 0) {
      throw new Error(
        `${what}: missing required column "${name}" (header: ${table.header.join(",")})`,
      );
    }
    indices.set(name, idx);
  }
  return indices;
}

export function numericCell(
  row: string[],
  index: number,
  column: string,
  rowNumber: number,
): number {
  const value = Number(row[index]);
  if (row[index] === undefined || row[index] === "" || Number.isNaN(value)) {
    throw new Error(
      `row ${rowNumber}: column "${column}" is not numeric (got "${row[index]}")`,
    );
  }
  return value;
}
