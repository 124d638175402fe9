// Payoff heatmap model: pure data transforms from /api/surface rows to a
// renderable grid. Brightness encodes player A's payoff on a 0..5 scale.

import type { SurfaceResponse } from "./api.js";

export interface HeatmapCell {
  pA: number;
  pB: number;
  payoffA: number;
  payoffB: number;
  brightness: number; // 0..1
}

export interface HeatmapGrid {
  steps: number;
  cells: HeatmapCell[][]; // [row = p_a index][col = p_b index]
  pValues: number[];
}

export const PAYOFF_SCALE = 5;

export function buildHeatmap(surface: SurfaceResponse): HeatmapGrid {
  const { steps, rows } = surface;
  if (rows.length !== steps * steps) {
    throw new Error(`surface has ${rows.length} rows, expected ${steps * steps}`);
  }
  const cells: HeatmapCell[][] = [];
  const pValues: number[] = [];
  for (let i = 0; i < steps; i++) {
    const line: HeatmapCell[] = [];
    for (let j = 0; j < steps; j++) {
      const row = rows[i * steps + j]!;
      const [pA, pB, payoffA, payoffB] = [row[0]!, row[1]!, row[2]!, row[3]!];
      line.push({ pA, pB, payoffA, payoffB, brightness: payoffA / PAYOFF_SCALE });
      if (i === 0) pValues.push(pB);
    }
    cells.push(line);
  }
  return { steps, cells, pValues };
}

export function nearestIndex(pValues: number[], p: number): number {
  let best = 0;
  let bestDist = Infinity;
  pValues.forEach((value, index) => {
    const dist = Math.abs(value - p);
    if (dist < bestDist) {
      best = index;
      bestDist = dist;
    }
  });
  return best;
}

export function markerCell(grid: HeatmapGrid, pA: number, pB: number): HeatmapCell {
  const row = nearestIndex(grid.pValues, pA);
  const col = nearestIndex(grid.pValues, pB);
  return grid.cells[row]![col]!;
}

export function brightestCell(grid: HeatmapGrid): HeatmapCell {
  let best: HeatmapCell = grid.cells[0]![0]!;
  for (const line of grid.cells) {
    for (const cell of line) {
      if (cell.payoffA > best.payoffA) best = cell;
    }
  }
  return best;
}
