import { binIndexForScore } from "./selection.js";

/** Per-bin virtual point indices; always a partition of all indices. */
export function binMembers(scores: number[], edges: number[]): number[][] {
  const members: number[][] = Array.from({ length: edges.length - 1 }, () => []);
  scores.forEach((s, i) => {
    members[binIndexForScore(s, edges)].push(i);
  });
  return members;
}

export function binCounts(scores: number[], edges: number[]): number[] {
  return binMembers(scores, edges).map((m) => m.length);
}
