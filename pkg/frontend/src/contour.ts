import { contours } from "d3-contour";

import { colormap, type Rgb } from "./colormap.js";
import type { GridData } from "./grid.js";
import { Raster } from "./raster.js";

export interface ContourOptions {
  width: number;
  height: number;
  colormapName: string;
  levels: number[];
}

const AXIS: Rgb = [30, 30, 30];

function tickLabel(v: number): string {
  const s = v.toFixed(1);
  return s === "-0.0" ? "0.0" : s;
}

/** Render isolines of the probability over the (a0, b0) plane. */
export function renderContour(grid: GridData, opts: ContourOptions): Raster {
  const { width, height, levels } = opts;
  for (let i = 1; i < levels.length; i++) {
    if (!(levels[i] > levels[i - 1])) {
      throw new Error(`contour levels must be strictly increasing, got ${levels.join(", ")}`);
    }
  }
  const cmap = colormap(opts.colormapName);
  const img = new Raster(width, height);
  const mLeft = 78;
  const mRight = 24;
  const mTop = 24;
  const mBottom = 62;
  const plotW = width - mLeft - mRight;
  const plotH = height - mTop - mBottom;

  const na = grid.a0.length;
  const nb = grid.b0.length;
  // horizontal axis: a0, vertical axis: b0
  const xOf = (a0: number) => mLeft + ((a0 - grid.a0[0]) / (grid.a0[na - 1] - grid.a0[0])) * plotW;
  const yOf = (b0: number) => mTop + plotH - ((b0 - grid.b0[0]) / (grid.b0[nb - 1] - grid.b0[0])) * plotH;

  // frame
  img.line(mLeft, mTop, mLeft + plotW, mTop, AXIS);
  img.line(mLeft, mTop + plotH, mLeft + plotW, mTop + plotH, AXIS);
  img.line(mLeft, mTop, mLeft, mTop + plotH, AXIS);
  img.line(mLeft + plotW, mTop, mLeft + plotW, mTop + plotH, AXIS);

  // ticks and labels at -1, -0.5, 0, 0.5, 1 (restricted to the data range)
  for (const t of [-1, -0.5, 0, 0.5, 1]) {
    if (t >= grid.a0[0] - 1e-12 && t <= grid.a0[na - 1] + 1e-12) {
      const x = xOf(t);
      img.line(x, mTop + plotH, x, mTop + plotH + 6, AXIS);
      const label = tickLabel(t);
      img.text(x - img.textWidth(label) / 2, mTop + plotH + 10, label, AXIS);
    }
    if (t >= grid.b0[0] - 1e-12 && t <= grid.b0[nb - 1] + 1e-12) {
      const y = yOf(t);
      img.line(mLeft - 6, y, mLeft, y, AXIS);
      const label = tickLabel(t);
      img.text(mLeft - 10 - img.textWidth(label), y - 7, label, AXIS);
    }
  }
  // axis names
  img.text(mLeft + plotW / 2 - img.textWidth("a0") / 2, height - 20, "a0", AXIS);
  img.text(16, mTop + plotH / 2 - 7, "b0", AXIS);

  // d3-contour consumes row-major values with x fastest; use x = a0 index
  const flat = new Array<number>(na * nb);
  for (let j = 0; j < nb; j++) {
    for (let i = 0; i < na; i++) {
      flat[j * na + i] = grid.probs[i][j];
    }
  }
  const maxLevel = Math.max(...levels, 0.6);
  const generator = contours().size([na, nb]).smooth(true);
  const aStep = (grid.a0[na - 1] - grid.a0[0]) / (na - 1);
  const bStep = (grid.b0[nb - 1] - grid.b0[0]) / (nb - 1);
  for (const level of levels) {
    const color = cmap(level / maxLevel);
    const multi = generator.contour(flat, level);
    for (const polygon of multi.coordinates) {
      for (const ring of polygon) {
        for (let k = 0; k + 1 < ring.length; k++) {
          // grid coordinate c corresponds to data index c - 0.5
          const [gx0, gy0] = ring[k];
          const [gx1, gy1] = ring[k + 1];
          img.line(
            xOf(grid.a0[0] + (gx0 - 0.5) * aStep),
            yOf(grid.b0[0] + (gy0 - 0.5) * bStep),
            xOf(grid.a0[0] + (gx1 - 0.5) * aStep),
            yOf(grid.b0[0] + (gy1 - 0.5) * bStep),
            color,
            2,
          );
        }
      }
    }
  }
  return img;
}
