/** Decision-boundary figure: filled sign regions from a score grid, the
 * zero contour, and the dataset scatter on top. Axes limits come from the
 * grid bounds; data values are never rescaled beyond that mapping. */

import { columnIndices, numericCell, parseCsv } from "./csv.js";
import { schemeByName } from "./colors.js";
import { drawText } from "./font.js";
import { encodePng } from "./png.js";
import { Raster } from "./raster.js";

export const GRID_COLUMNS = ["x1", "x2", "score", "label"];
export const DATA_COLUMNS = ["f1", "f2", "label"];

export interface GridData {
  xs: number[]; // sorted unique x1 values
  ys: number[]; // sorted unique x2 values
  /** score[iy][ix], iy indexing ys ascending */
  score: number[][];
}

export interface ScatterPoint {
  x: number;
  y: number;
  label: number;
}

export function parseGridCsv(text: string): GridData {
  const table = parseCsv(text);
  const cols = columnIndices(table, GRID_COLUMNS, "grid CSV");
  if (table.rows.length === 0) {
    throw new Error("grid CSV: no data rows");
  }
  const x1 = cols.get("x1")!;
  const x2 = cols.get("x2")!;
  const sc = cols.get("score")!;
  const xsSet = new Set<number>();
  const ysSet = new Set<number>();
  const entries: Array<[number, number, number]> = [];
  table.rows.forEach((row, i) => {
    const x = numericCell(row, x1, "x1", i + 2);
    const y = numericCell(row, x2, "x2", i + 2);
    const s = numericCell(row, sc, "score", i + 2);
    xsSet.add(x);
    ysSet.add(y);
    entries.push([x, y, s]);
  });
  const xs = [...xsSet].sort((a, b) => a - b);
  const ys = [...ysSet].sort((a, b) => a - b);
  if (xs.length * ys.length !== entries.length) {
    throw new Error(
      `grid CSV: ${entries.length} rows do not form a ${xs.length}x${ys.length} lattice`,
    );
  }
  const xIndex = new Map(xs.map((v, i) => [v, i]));
  const yIndex = new Map(ys.map((v, i) => [v, i]));
  const score = ys.map(() => new Array<number>(xs.length).fill(NaN));
  for (const [x, y, s] of entries) {
    score[yIndex.get(y)!][xIndex.get(x)!] = s;
  }
  return { xs, ys, score };
}

export function parseDataCsv(text: string): ScatterPoint[] {
  const table = parseCsv(text);
  const cols = columnIndices(table, DATA_COLUMNS, "dataset CSV");
  const f1 = cols.get("f1")!;
  const f2 = cols.get("f2")!;
  const lb = cols.get("label")!;
  return table.rows.map((row, i) => ({
    x: numericCell(row, f1, "f1", i + 2),
    y: numericCell(row, f2, "f2", i + 2),
    label: numericCell(row, lb, "label", i + 2),
  }));
}

export interface BoundaryOptions {
  title?: string;
  scheme?: string;
  targetSize?: number; // approximate longest image side in pixels
  drawContour?: boolean;
}

export function renderBoundaryRaster(
  grid: GridData,
  points: ScatterPoint[],
  options: BoundaryOptions = {},
): Raster {
  const scheme = schemeByName(options.scheme);
  const nx = grid.xs.length;
  const ny = grid.ys.length;
  const target = options.targetSize ?? 480;
  const cell = Math.max(1, Math.floor(target / Math.max(nx, ny)));
  const width = nx * cell;
  const height = ny * cell;
  const img = new Raster(width, height);

  // region fill; image row 0 shows the largest x2 (plot orientation)
  for (let iy = 0; iy < ny; iy++) {
    for (let ix = 0; ix < nx; ix++) {
      const s = grid.score[ny - 1 - iy][ix];
      img.fillRect(
        ix * cell,
        iy * cell,
        cell,
        cell,
        s >= 0 ? scheme.positiveRegion : scheme.negativeRegion,
      );
    }
  }

  if (options.drawContour ?? true) {
    for (let iy = 0; iy < ny; iy++) {
      for (let ix = 0; ix < nx; ix++) {
        const here = grid.score[ny - 1 - iy][ix] >= 0;
        const right = ix + 1 < nx && (grid.score[ny - 1 - iy][ix + 1] >= 0) !== here;
        const below = iy + 1 < ny && (grid.score[ny - 2 - iy][ix] >= 0) !== here;
        if (right) {
          img.fillRect((ix + 1) * cell - 1, iy * cell, 1, cell, scheme.contour);
        }
        if (below) {
          img.fillRect(ix * cell, (iy + 1) * cell - 1, cell, 1, scheme.contour);
        }
      }
    }
  }

  const xMin = grid.xs[0];
  const xMax = grid.xs[nx - 1];
  const yMin = grid.ys[0];
  const yMax = grid.ys[ny - 1];
  const radius = Math.max(2, Math.floor(cell * 0.8));
  for (const p of points) {
    if (p.x < xMin || p.x > xMax || p.y < yMin || p.y > yMax) continue;
    const px = ((p.x - xMin) / (xMax - xMin)) * (width - 1);
    const py = (1 - (p.y - yMin) / (yMax - yMin)) * (height - 1);
    img.drawDisc(px, py, radius, p.label >= 0 ? scheme.positivePoint : scheme.negativePoint);
    img.drawCircleOutline(px, py, radius, scheme.pointOutline);
  }

  if (options.title) {
    drawText(img, 4, 4, options.title, scheme.text, 1);
  }
  return img;
}

export function renderBoundaryPng(
  gridCsvText: string,
  dataCsvText: string,
  options: BoundaryOptions = {},
): Buffer {
  const grid = parseGridCsv(gridCsvText);
  const points = parseDataCsv(dataCsvText);
  const img = renderBoundaryRaster(grid, points, options);
  const text: Record<string, string> = { Software: "qksvm-figures" };
  if (options.title) {
    text.Title = options.title;
  }
  return encodePng(img.width, img.height, img.data, text);
}
