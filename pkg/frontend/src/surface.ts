import { colormap, type Rgb } from "./colormap.js";
import type { GridData } from "./grid.js";
import { Raster } from "./raster.js";

export interface SurfaceOptions {
  width: number;
  height: number;
  colormapName: string;
  /** camera angles in degrees */
  azimuth?: number;
  elevation?: number;
}

interface Quad {
  depth: number;
  px: number[];
  py: number[];
  value: number;
  shade: number;
}

/** Orthographic projection after azimuth (about z) and elevation rotations. */
function project(az: number, el: number) {
  const ca = Math.cos(az);
  const sa = Math.sin(az);
  const ce = Math.cos(el);
  const se = Math.sin(el);
  return (x: number, y: number, z: number) => {
    const x1 = ca * x - sa * y;
    const y1 = sa * x + ca * y;
    return {
      sx: x1,
      sy: y1 * se + z * ce, // screen-up component
      depth: -y1 * ce + z * se,
    };
  };
}

/** Render the probability surface over (a0, b0) as a shaded quad mesh. */
export function renderSurface(grid: GridData, opts: SurfaceOptions): Raster {
  const { width, height } = opts;
  const cmap = colormap(opts.colormapName);
  const az = ((opts.azimuth ?? -50) * Math.PI) / 180;
  const el = ((opts.elevation ?? 28) * Math.PI) / 180;
  const proj = project(az, el);

  const na = grid.a0.length;
  const nb = grid.b0.length;
  const aSpan = grid.a0[na - 1] - grid.a0[0];
  const bSpan = grid.b0[nb - 1] - grid.b0[0];
  const zMax = Math.max(0.6, ...grid.probs.map((row) => Math.max(...row)));
  // world coordinates in [-1, 1]^2 x [0, zScale]
  const wx = (j: number) => (2 * (grid.b0[j] - grid.b0[0])) / bSpan - 1;
  const wy = (i: number) => (2 * (grid.a0[i] - grid.a0[0])) / aSpan - 1;
  const wz = (v: number) => (0.9 * v) / zMax;

  // fit the projected bounding box into the pixel frame
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const x of [-1, 1]) {
    for (const y of [-1, 1]) {
      for (const z of [0, 0.9]) {
        const p = proj(x, y, z);
        minX = Math.min(minX, p.sx);
        maxX = Math.max(maxX, p.sx);
        minY = Math.min(minY, p.sy);
        maxY = Math.max(maxY, p.sy);
      }
    }
  }
  const margin = 0.06 * Math.min(width, height);
  const scale = Math.min((width - 2 * margin) / (maxX - minX), (height - 2 * margin) / (maxY - minY));
  const toPx = (sx: number, sy: number): [number, number] => [
    (width - scale * (maxX - minX)) / 2 + scale * (sx - minX),
    (height + scale * (maxY - minY)) / 2 - scale * (sy - minY),
  ];

  const light = normalize([-0.4, 0.5, 1.0]);
  const quads: Quad[] = [];
  for (let i = 0; i + 1 < na; i++) {
    for (let j = 0; j + 1 < nb; j++) {
      const corners: Array<[number, number, number]> = [
        [wx(j), wy(i), wz(grid.probs[i][j])],
        [wx(j + 1), wy(i), wz(grid.probs[i][j + 1])],
        [wx(j + 1), wy(i + 1), wz(grid.probs[i + 1][j + 1])],
        [wx(j), wy(i + 1), wz(grid.probs[i + 1][j])],
      ];
      const px: number[] = [];
      const py: number[] = [];
      let depth = 0;
      for (const [x, y, z] of corners) {
        const p = proj(x, y, z);
        const [cx, cy] = toPx(p.sx, p.sy);
        px.push(cx);
        py.push(cy);
        depth += p.depth;
      }
      const value =
        (grid.probs[i][j] + grid.probs[i][j + 1] + grid.probs[i + 1][j] + grid.probs[i + 1][j + 1]) / 4;
      const u = sub(corners[1], corners[0]);
      const v = sub(corners[3], corners[0]);
      const n = normalize(cross(u, v));
      const shade = 0.72 + 0.28 * Math.max(0, dot(n, light));
      quads.push({ depth: depth / 4, px, py, value, shade });
    }
  }
  quads.sort((a, b) => a.depth - b.depth);

  const img = new Raster(width, height);
  // base outline of the (a0, b0) square at z = 0
  const base: Array<[number, number]> = [];
  for (const [x, y] of [
    [-1, -1],
    [1, -1],
    [1, 1],
    [-1, 1],
  ] as Array<[number, number]>) {
    const p = proj(x, y, 0);
    base.push(toPx(p.sx, p.sy));
  }
  for (let k = 0; k < 4; k++) {
    const [x0, y0] = base[k];
    const [x1, y1] = base[(k + 1) % 4];
    img.line(x0, y0, x1, y1, [170, 170, 170]);
  }
  for (const q of quads) {
    const color = cmap(q.value / zMax).map((c) => Math.round(c * q.shade)) as Rgb;
    img.fillPolygon(
      q.px.map((x, k) => [x, q.py[k]] as [number, number]),
      color,
    );
  }
  return img;
}

function sub(a: number[], b: number[]): number[] {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function cross(a: number[], b: number[]): number[] {
  return [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
}

function dot(a: number[], b: number[]): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function normalize(a: number[]): number[] {
  const n = Math.hypot(a[0], a[1], a[2]);
  return n > 0 ? [a[0] / n, a[1] / n, a[2] / n] : a;
}
