/** Shapes of the compatibility-explorer bundle file (format_version 1). */

export interface MatchRecord {
  virt_index: number;
  phys_index: number;
  theta_index: number;
  score: number;
}

export interface EnvironmentGeometry {
  name: string;
  boundary: number[][];
  obstacles: number[][][];
}

export interface VizBundle {
  format_version: number;
  kind: "viz_bundle";
  env_phys: EnvironmentGeometry;
  env_virt: EnvironmentGeometry;
  phys_points: number[][];
  virt_points: number[][];
  scores: number[];
  mean: number;
  std: number;
  matches: MatchRecord[];
  histogram: { bin_edges: number[] };
  traces: unknown[];
}

/** Serializable brushing state; a pure function of user input and the bundle. */
export interface Selection {
  virtIndices: number[];
  physIndices: number[];
  activeBin: number | null;
}
