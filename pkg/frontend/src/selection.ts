import type { Selection, VizBundle } from "./types.js";

/** Even-odd containment test of a point in a polygon ring. */
export function pointInPolygon(p: number[], ring: number[][]): boolean {
  let inside = false;
  const n = ring.length;
  for (let i = 0, j = n - 1; i < n; j = i++) {
    const [xi, yi] = ring[i];
    const [xj, yj] = ring[j];
    if (yi > p[1] !== yj > p[1]) {
      const xCross = ((xj - xi) * (p[1] - yi)) / (yj - yi) + xi;
      if (p[0] < xCross) inside = !inside;
    }
  }
  return inside;
}

export function emptySelection(): Selection {
  return { virtIndices: [], physIndices: [], activeBin: null };
}

/** The physical side of a selection: exactly the matched partners, deduped. */
export function derivePhysIndices(bundle: VizBundle, virtIndices: number[]): number[] {
  const set = new Set<number>();
  for (const i of virtIndices) set.add(bundle.matches[i].phys_index);
  return [...set].sort((a, b) => a - b);
}

/**
 * Select the virtual points inside a lasso polygon (map coordinates).
 * Degenerate lassos (< 3 points) are a no-op, signalled by null.
 */
export function lassoSelect(bundle: VizBundle, lasso: number[][]): Selection | null {
  if (lasso.length < 3) return null;
  const virtIndices: number[] = [];
  bundle.virt_points.forEach((p, i) => {
    if (pointInPolygon(p, lasso)) virtIndices.push(i);
  });
  return {
    virtIndices,
    physIndices: derivePhysIndices(bundle, virtIndices),
    activeBin: null,
  };
}

/** Bin index for a score given ascending edges; the top edge closes the last bin. */
export function binIndexForScore(score: number, edges: number[]): number {
  const bins = edges.length - 1;
  if (score <= edges[0]) return 0;
  if (score >= edges[bins]) return bins - 1;
  let lo = 0;
  let hi = bins - 1;
  while (lo < hi) {
    const mid = (lo + hi + 1) >> 1;
    if (score >= edges[mid]) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

/** Transient highlight of every point whose score falls in one histogram bin. */
export function binSelect(bundle: VizBundle, binIndex: number): Selection {
  const edges = bundle.histogram.bin_edges;
  if (binIndex < 0 || binIndex >= edges.length - 1) return emptySelection();
  const virtIndices: number[] = [];
  bundle.scores.forEach((s, i) => {
    if (binIndexForScore(s, edges) === binIndex) virtIndices.push(i);
  });
  return {
    virtIndices,
    physIndices: derivePhysIndices(bundle, virtIndices),
    activeBin: binIndex,
  };
}
