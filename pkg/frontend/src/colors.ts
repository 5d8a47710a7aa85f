/** Named color schemes for the figures. */

import { Color } from "./raster.js";

export interface Scheme {
  positiveRegion: Color;
  negativeRegion: Color;
  contour: Color;
  positivePoint: Color;
  negativePoint: Color;
  pointOutline: Color;
  text: Color;
  tableHighlight: Color;
  gridLine: Color;
}

export const SCHEMES: Record<string, Scheme> = {
  default: {
    positiveRegion: [215, 232, 248, 255],
    negativeRegion: [250, 224, 220, 255],
    contour: [70, 70, 70, 255],
    positivePoint: [25, 80, 170, 255],
    negativePoint: [180, 40, 30, 255],
    pointOutline: [255, 255, 255, 255],
    text: [20, 20, 20, 255],
    tableHighlight: [255, 240, 170, 255],
    gridLine: [170, 170, 170, 255],
  },
  ocean: {
    positiveRegion: [212, 240, 235, 255],
    negativeRegion: [235, 228, 248, 255],
    contour: [40, 60, 70, 255],
    positivePoint: [10, 110, 100, 255],
    negativePoint: [90, 50, 160, 255],
    pointOutline: [255, 255, 255, 255],
    text: [20, 20, 20, 255],
    tableHighlight: [220, 245, 200, 255],
    gridLine: [160, 170, 175, 255],
  },
};

export function schemeByName(name: string | undefined): Scheme {
  const scheme = SCHEMES[name ?? "default"];
  if (!scheme) {
    throw new Error(
      `unknown color scheme "${name}" (available: ${Object.keys(SCHEMES).join(", ")})`,
    );
  }
  return scheme;
}
