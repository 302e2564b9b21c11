import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { binSelect, emptySelection, lassoSelect, pointInPolygon } from "../src/selection.js";
import { validateBundle } from "../src/validate.js";
import { allZeroBundle, gridBundle, manyToOneBundle } from "./fixtures.js";

const here = dirname(fileURLToPath(import.meta.url));

function realBundle() {
  return validateBundle(
    JSON.parse(readFileSync(join(here, "fixtures", "bundle_small.json"), "utf-8")),
  );
}

function expectedPhys(bundle: ReturnType<typeof gridBundle>, virtIndices: number[]) {
  return [...new Set(virtIndices.map((i) => bundle.matches[i].phys_index))].sort(
    (a, b) => a - b,
  );
}

describe("pointInPolygon", () => {
  const square = [
    [0, 0],
    [4, 0],
    [4, 4],
    [0, 4],
  ];
  it("classifies interior and exterior points", () => {
    expect(pointInPolygon([2, 2], square)).toBe(true);
    expect(pointInPolygon([5, 2], square)).toBe(false);
    expect(pointInPolygon([-1, -1], square)).toBe(false);
  });
  it("handles concave lassos", () => {
    const lShape = [
      [0, 0],
      [4, 0],
      [4, 1],
      [1, 1],
      [1, 4],
      [0, 4],
    ];
    expect(pointInPolygon([0.5, 3], lShape)).toBe(true);
    expect(pointInPolygon([3, 3], lShape)).toBe(false);
  });
});

describe("lassoSelect", () => {
  it("fixture 1 (grid): lasso around everything selects all matched partners", () => {
    const bundle = gridBundle();
    const all = lassoSelect(bundle, [
      [0, 0],
      [10, 0],
      [10, 10],
      [0, 10],
    ])!;
    expect(all.virtIndices).toEqual([...bundle.virt_points.keys()]);
    expect(all.physIndices).toEqual(expectedPhys(bundle, all.virtIndices));
    expect(all.physIndices).toEqual([0, 1, 2, 3, 4]);
  });

  it("fixture 1 (grid): lasso around a single point highlights exactly its match", () => {
    const bundle = gridBundle();
    // virtual point 5 sits at (3.5, 3.5); its match is 5 % 5 = 0
    const sel = lassoSelect(bundle, [
      [3.0, 3.0],
      [4.0, 3.0],
      [4.0, 4.0],
      [3.0, 4.0],
    ])!;
    expect(sel.virtIndices).toEqual([5]);
    expect(sel.physIndices).toEqual([bundle.matches[5].phys_index]);
  });

  it("fixture 1 (grid): empty region selects nothing", () => {
    const bundle = gridBundle();
    const sel = lassoSelect(bundle, [
      [6.8, 6.8],
      [7.8, 6.8],
      [7.8, 7.8],
      [6.8, 7.8],
    ])!;
    expect(sel).toEqual(emptySelection());
  });

  it("fixture 2 (many-to-one): derived physical set is deduplicated", () => {
    const bundle = manyToOneBundle();
    const sel = lassoSelect(bundle, [
      [0.5, 0.5],
      [4.5, 0.5],
      [4.5, 1.5],
      [0.5, 1.5],
    ])!;
    expect(sel.virtIndices).toEqual([0, 1, 2, 3]);
    expect(sel.physIndices).toEqual([1]);
  });

  it("fixture 3 (exported by the CLI): selection matches the match table", () => {
    const bundle = realBundle();
    const [xmin, ymin] = [0, 0];
    const [xmax, ymax] = [4.5, 4.5];
    const lasso = [
      [xmin, ymin],
      [xmax, ymin],
      [xmax, ymax],
      [xmin, ymax],
    ];
    const sel = lassoSelect(bundle, lasso)!;
    const expectVirt = bundle.virt_points
      .map((p, i) => [p, i] as const)
      .filter(([p]) => p[0] > xmin && p[0] < xmax && p[1] > ymin && p[1] < ymax)
      .map(([, i]) => i);
    expect(sel.virtIndices).toEqual(expectVirt);
    expect(sel.virtIndices.length).toBeGreaterThan(0);
    expect(sel.physIndices).toEqual(expectedPhys(bundle, expectVirt));
  });

  it("degenerate lasso is a no-op", () => {
    const bundle = gridBundle();
    expect(lassoSelect(bundle, [])).toBeNull();
    expect(lassoSelect(bundle, [[1, 1], [2, 2]])).toBeNull();
  });
});

describe("binSelect", () => {
  it("derives physical partners for a populated bin", () => {
    const bundle = gridBundle();
    const sel = binSelect(bundle, 0);
    expect(sel.activeBin).toBe(0);
    expect(sel.virtIndices).toContain(0);
    expect(sel.physIndices).toEqual(expectedPhys(bundle, sel.virtIndices));
  });

  it("empty bin highlights nothing", () => {
    const bundle = manyToOneBundle();
    // scores 0.5/1.5/2.5/3.5 over [0, 3.5]: bin 1 ([0.175, 0.35)) is empty
    const sel = binSelect(bundle, 1);
    expect(sel.virtIndices).toEqual([]);
    expect(sel.physIndices).toEqual([]);
  });

  it("all-zero bundle puts every point in bin 0", () => {
    const bundle = allZeroBundle();
    const sel = binSelect(bundle, 0);
    expect(sel.virtIndices).toEqual([0, 1, 2]);
  });
});
