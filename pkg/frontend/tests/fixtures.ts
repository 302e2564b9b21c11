import type { VizBundle } from "../src/types.js";

/** Hand-buildable bundles with known geometry for selection tests. */

function edges(max: number): number[] {
  const out: number[] = [];
  for (let i = 0; i <= 20; i++) out.push((max * i) / 20);
  return out;
}

export function gridBundle(): VizBundle {
  // 4x4 grid of virtual points in a 10x10 room; phys partner = index % 5
  const virt: number[][] = [];
  const scores: number[] = [];
  for (let gy = 0; gy < 4; gy++) {
    for (let gx = 0; gx < 4; gx++) {
      virt.push([1 + gx * 2.5, 1 + gy * 2.5]);
      scores.push(gx + gy * 4);
    }
  }
  const phys = [
    [1, 1],
    [3, 1],
    [1, 3],
    [3, 3],
    [2, 2],
  ];
  return {
    format_version: 1,
    kind: "viz_bundle",
    env_phys: { name: "p", boundary: [[0, 0], [4, 0], [4, 4], [0, 4]], obstacles: [] },
    env_virt: { name: "v", boundary: [[0, 0], [10, 0], [10, 10], [0, 10]], obstacles: [] },
    phys_points: phys,
    virt_points: virt,
    scores,
    mean: scores.reduce((a, b) => a + b, 0) / scores.length,
    std: 0,
    matches: scores.map((s, i) => ({
      virt_index: i,
      phys_index: i % 5,
      theta_index: 0,
      score: s,
    })),
    histogram: { bin_edges: edges(Math.max(...scores)) },
    traces: [],
  };
}

export function manyToOneBundle(): VizBundle {
  // every virtual point maps to the same physical point
  const virt = [
    [1, 1],
    [2, 1],
    [3, 1],
    [4, 1],
  ];
  return {
    format_version: 1,
    kind: "viz_bundle",
    env_phys: { name: "p", boundary: [[0, 0], [5, 0], [5, 5], [0, 5]], obstacles: [] },
    env_virt: { name: "v", boundary: [[0, 0], [5, 0], [5, 5], [0, 5]], obstacles: [] },
    phys_points: [
      [2, 2],
      [3, 3],
    ],
    virt_points: virt,
    scores: [0.5, 1.5, 2.5, 3.5],
    mean: 2.0,
    std: 1.118,
    matches: virt.map((_, i) => ({
      virt_index: i,
      phys_index: 1,
      theta_index: i % 10,
      score: [0.5, 1.5, 2.5, 3.5][i],
    })),
    histogram: { bin_edges: edges(3.5) },
    traces: [],
  };
}

export function allZeroBundle(): VizBundle {
  const virt = [
    [1, 1],
    [2, 2],
    [3, 3],
  ];
  return {
    format_version: 1,
    kind: "viz_bundle",
    env_phys: { name: "p", boundary: [[0, 0], [4, 0], [4, 4], [0, 4]], obstacles: [] },
    env_virt: { name: "v", boundary: [[0, 0], [4, 0], [4, 4], [0, 4]], obstacles: [] },
    phys_points: virt,
    virt_points: virt,
    scores: [0, 0, 0],
    mean: 0,
    std: 0,
    matches: virt.map((_, i) => ({
      virt_index: i,
      phys_index: i,
      theta_index: 0,
      score: 0,
    })),
    histogram: { bin_edges: edges(1) },
    traces: [],
  };
}
