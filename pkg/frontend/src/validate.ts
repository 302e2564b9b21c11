import type { EnvironmentGeometry, VizBundle } from "./types.js";

/** Parse and validate a bundle object; throws with a readable message. */
export function validateBundle(raw: unknown): VizBundle {
  const obj = expectObject(raw, "bundle");
  if (obj.format_version !== 1) {
    throw new Error(`unsupported format_version ${String(obj.format_version)}`);
  }
  if (obj.kind !== "viz_bundle") {
    throw new Error(`kind ${String(obj.kind)} is not "viz_bundle"`);
  }
  const envPhys = validateEnvironment(obj.env_phys, "env_phys");
  const envVirt = validateEnvironment(obj.env_virt, "env_virt");
  const physPoints = expectPointArray(obj.phys_points, "phys_points");
  const virtPoints = expectPointArray(obj.virt_points, "virt_points");
  const scores = expectNumberArray(obj.scores, "scores");
  const n = virtPoints.length;
  if (scores.length !== n) {
    throw new Error(`scores length ${scores.length} != virt point count ${n}`);
  }
  if (!Array.isArray(obj.matches) || obj.matches.length !== n) {
    throw new Error(`matches length != virt point count ${n}`);
  }
  const matches = obj.matches.map((m, i) => validateMatch(m, i, physPoints.length));
  const hist = expectObject(obj.histogram, "histogram");
  const edges = expectNumberArray(hist.bin_edges, "histogram.bin_edges");
  if (edges.length !== 21) {
    throw new Error(`histogram needs 21 bin edges, got ${edges.length}`);
  }
  for (let i = 1; i < edges.length; i++) {
    if (!(edges[i] > edges[i - 1])) {
      throw new Error("histogram bin edges must increase");
    }
  }
  return {
    format_version: 1,
    kind: "viz_bundle",
    env_phys: envPhys,
    env_virt: envVirt,
    phys_points: physPoints,
    virt_points: virtPoints,
    scores,
    mean: expectNumber(obj.mean, "mean"),
    std: expectNumber(obj.std, "std"),
    matches,
    histogram: { bin_edges: edges },
    traces: Array.isArray(obj.traces) ? obj.traces : [],
  };
}

function expectObject(v: unknown, what: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) {
    throw new Error(`${what}: expected an object`);
  }
  return v as Record<string, unknown>;
}

function expectNumber(v: unknown, what: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new Error(`${what}: expected a finite number`);
  }
  return v;
}

function expectNumberArray(v: unknown, what: string): number[] {
  if (!Array.isArray(v)) throw new Error(`${what}: expected an array`);
  return v.map((x, i) => expectNumber(x, `${what}[${i}]`));
}

function expectPointArray(v: unknown, what: string): number[][] {
  if (!Array.isArray(v)) throw new Error(`${what}: expected an array`);
  return v.map((p, i) => {
    if (!Array.isArray(p) || p.length !== 2) {
      throw new Error(`${what}[${i}]: expected an [x, y] pair`);
    }
    return [expectNumber(p[0], `${what}[${i}].x`), expectNumber(p[1], `${what}[${i}].y`)];
  });
}

function validateEnvironment(v: unknown, what: string): EnvironmentGeometry {
  const obj = expectObject(v, what);
  const boundary = expectPointArray(obj.boundary, `${what}.boundary`);
  if (boundary.length < 3) throw new Error(`${what}.boundary: needs 3+ vertices`);
  if (!Array.isArray(obj.obstacles)) throw new Error(`${what}.obstacles: expected an array`);
  const obstacles = obj.obstacles.map((o, i) => {
    const ring = expectPointArray(o, `${what}.obstacles[${i}]`);
    if (ring.length < 3) throw new Error(`${what}.obstacles[${i}]: needs 3+ vertices`);
    return ring;
  });
  return { name: String(obj.name ?? ""), boundary, obstacles };
}

function validateMatch(v: unknown, i: number, physCount: number) {
  const obj = expectObject(v, `matches[${i}]`);
  const rec = {
    virt_index: expectNumber(obj.virt_index, `matches[${i}].virt_index`),
    phys_index: expectNumber(obj.phys_index, `matches[${i}].phys_index`),
    theta_index: expectNumber(obj.theta_index, `matches[${i}].theta_index`),
    score: expectNumber(obj.score, `matches[${i}].score`),
  };
  if (rec.virt_index !== i) throw new Error(`matches[${i}]: virt_index mismatch`);
  if (rec.phys_index < 0 || rec.phys_index >= physCount) {
    throw new Error(`matches[${i}]: phys_index ${rec.phys_index} out of range`);
  }
  return rec;
}
