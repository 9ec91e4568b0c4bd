import Papa from "papaparse";

export interface GridData {
  /** ascending bias values of the first measurement (rows) */
  a0: number[];
  /** ascending bias values of the second measurement (columns) */
  b0: number[];
  /** probs[i][j] = incompatibility probability at (a0[i], b0[j]) */
  probs: number[][];
}

const HEADER = ["a0", "b0", "prob", "stderr", "n"];

/** Parse and validate the estimator's grid CSV.
 *
 * Rejects wrong headers, non-rectangular grids, and probabilities outside
 * [0, 1]; out-of-range values are an input error, never clipped.
 */
export function parseGrid(csv: string): GridData {
  const parsed = Papa.parse<Record<string, string>>(csv.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new Error(`malformed CSV: ${parsed.errors[0].message} (row ${parsed.errors[0].row})`);
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.length !== HEADER.length || HEADER.some((h, i) => fields[i] !== h)) {
    throw new Error(`unexpected header [${fields.join(",")}], expected [${HEADER.join(",")}]`);
  }
  const cells = new Map<string, number>();
  const a0Set = new Set<number>();
  const b0Set = new Set<number>();
  for (const row of parsed.data) {
    const a0 = Number(row.a0);
    const b0 = Number(row.b0);
    const prob = Number(row.prob);
    if (!Number.isFinite(a0) || !Number.isFinite(b0) || !Number.isFinite(prob)) {
      throw new Error(`non-numeric row: ${JSON.stringify(row)}`);
    }
    if (prob < 0 || prob > 1) {
      throw new Error(`probability ${prob} at (${a0}, ${b0}) outside [0, 1]`);
    }
    const key = `${a0}|${b0}`;
    if (cells.has(key)) {
      throw new Error(`duplicate cell (${a0}, ${b0})`);
    }
    cells.set(key, prob);
    a0Set.add(a0);
    b0Set.add(b0);
  }
  const a0 = [...a0Set].sort((x, y) => x - y);
  const b0 = [...b0Set].sort((x, y) => x - y);
  if (a0.length < 2 || b0.length < 2) {
    throw new Error("grid needs at least 2 nodes per axis");
  }
  if (cells.size !== a0.length * b0.length) {
    throw new Error(`grid is not rectangular: ${cells.size} cells for ${a0.length} x ${b0.length} nodes`);
  }
  const probs = a0.map((x) =>
    b0.map((y) => {
      const v = cells.get(`${x}|${y}`);
      if (v === undefined) throw new Error(`grid is not rectangular: missing cell (${x}, ${y})`);
      return v;
    }),
  );
  return { a0, b0, probs };
}

/** Restrict a grid to nonnegative biases on both axes. */
export function quarterGrid(grid: GridData): GridData {
  const ai = grid.a0.map((v, i) => [v, i] as const).filter(([v]) => v >= 0);
  const bi = grid.b0.map((v, i) => [v, i] as const).filter(([v]) => v >= 0);
  if (ai.length < 2 || bi.length < 2) {
    throw new Error("quarter view needs at least 2 nonnegative nodes per axis");
  }
  return {
    a0: ai.map(([v]) => v),
    b0: bi.map(([v]) => v),
    probs: ai.map(([, i]) => bi.map(([, j]) => grid.probs[i][j])),
  };
}

/** Location and value of the grid maximum. */
export function gridMax(grid: GridData): { a0: number; b0: number; value: number } {
  let best = { a0: grid.a0[0], b0: grid.b0[0], value: -Infinity };
  for (let i = 0; i < grid.a0.length; i++) {
    for (let j = 0; j < grid.b0.length; j++) {
      if (grid.probs[i][j] > best.value) {
        best = { a0: grid.a0[i], b0: grid.b0[j], value: grid.probs[i][j] };
      }
    }
  }
  return best;
}
