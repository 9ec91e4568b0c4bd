export type Rgb = [number, number, number];

// 16 evenly spaced anchors of the viridis palette
const VIRIDIS: Rgb[] = [
  [68, 1, 84],
  [72, 26, 108],
  [71, 47, 125],
  [65, 68, 135],
  [57, 86, 140],
  [49, 104, 142],
  [42, 120, 142],
  [35, 136, 142],
  [31, 152, 139],
  [34, 168, 132],
  [53, 183, 121],
  [84, 197, 104],
  [122, 209, 81],
  [165, 219, 54],
  [210, 226, 27],
  [253, 231, 37],
];

function interpolate(anchors: Rgb[], t: number): Rgb {
  const x = Math.min(Math.max(t, 0), 1) * (anchors.length - 1);
  const i = Math.min(Math.floor(x), anchors.length - 2);
  const f = x - i;
  return [0, 1, 2].map((k) => Math.round(anchors[i][k] * (1 - f) + anchors[i + 1][k] * f)) as Rgb;
}

export function colormap(name: string): (t: number) => Rgb {
  switch (name) {
    case "viridis":
      return (t) => interpolate(VIRIDIS, t);
    case "gray":
      return (t) => {
        const v = Math.round(255 * Math.min(Math.max(t, 0), 1));
        return [v, v, v];
      };
    default:
      throw new Error(`unknown colormap '${name}' (available: viridis, gray)`);
  }
}
