import { readFileSync, writeFileSync } from "node:fs";

import { renderContour } from "./contour.js";
import { gridMax, parseGrid, quarterGrid, type GridData } from "./grid.js";
import { encodePng } from "./png.js";
import type { Raster } from "./raster.js";
import { renderSurface } from "./surface.js";

export type FigureKind = "surface" | "contour" | "quarter";

export interface FigureJob {
  input: string;
  kind: FigureKind;
  output: string;
  colormapName?: string;
  /** strictly increasing isoline values (contour kind only) */
  levels?: number[];
  width?: number;
  height?: number;
  dpi?: number;
}

export const DEFAULT_LEVELS = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55];

export interface RenderResult {
  grid: GridData;
  raster: Raster;
  max: { a0: number; b0: number; value: number };
}

/** Rasterize one figure kind from grid data (pure: no I/O). */
export function renderData(grid: GridData, job: Omit<FigureJob, "input" | "output">): RenderResult {
  const width = job.width ?? 1000;
  const height = job.height ?? 800;
  const colormapName = job.colormapName ?? "viridis";
  let raster: Raster;
  if (job.kind === "contour") {
    raster = renderContour(grid, {
      width,
      height,
      colormapName,
      levels: job.levels ?? DEFAULT_LEVELS,
    });
  } else if (job.kind === "surface" || job.kind === "quarter") {
    const data = job.kind === "quarter" ? quarterGrid(grid) : grid;
    raster = renderSurface(data, { width, height, colormapName });
  } else {
    throw new Error(`unknown figure kind '${job.kind}'`);
  }
  return { grid, raster, max: gridMax(grid) };
}

/** Read the grid CSV, render, and write the PNG. */
export function render(job: FigureJob): RenderResult {
  const grid = parseGrid(readFileSync(job.input, "utf8"));
  const result = renderData(grid, job);
  writeFileSync(job.output, encodePng(result.raster.width, result.raster.height, result.raster.data, job.dpi ?? 200));
  return result;
}
