import { colorForValue, DIM_ALPHA, HIGHLIGHT_COLOR } from "./color.js";
import { binCounts } from "./histogram.js";
import type { EnvironmentGeometry, Selection, VizBundle } from "./types.js";

export interface MapTransform {
  scale: number;
  ox: number;
  oy: number;
}

/** World-to-canvas transform that fits a boundary with padding (y up). */
export function fitTransform(
  boundary: number[][],
  width: number,
  height: number,
  pad = 16,
): MapTransform {
  let xmin = Infinity;
  let xmax = -Infinity;
  let ymin = Infinity;
  let ymax = -Infinity;
  for (const [x, y] of boundary) {
    xmin = Math.min(xmin, x);
    xmax = Math.max(xmax, x);
    ymin = Math.min(ymin, y);
    ymax = Math.max(ymax, y);
  }
  const scale = Math.min(
    (width - 2 * pad) / (xmax - xmin || 1),
    (height - 2 * pad) / (ymax - ymin || 1),
  );
  return {
    scale,
    ox: pad - xmin * scale + (width - 2 * pad - (xmax - xmin) * scale) / 2,
    oy: height - pad + ymin * scale - (height - 2 * pad - (ymax - ymin) * scale) / 2,
  };
}

export function toCanvas(t: MapTransform, p: number[]): [number, number] {
  return [p[0] * t.scale + t.ox, t.oy - p[1] * t.scale];
}

export function toWorld(t: MapTransform, x: number, y: number): [number, number] {
  return [(x - t.ox) / t.scale, (t.oy - y) / t.scale];
}

function tracePath(ctx: CanvasRenderingContext2D, t: MapTransform, ring: number[][]) {
  ctx.beginPath();
  ring.forEach((p, i) => {
    const [cx, cy] = toCanvas(t, p);
    if (i === 0) ctx.moveTo(cx, cy);
    else ctx.lineTo(cx, cy);
  });
  ctx.closePath();
}

export function drawEnvironment(
  ctx: CanvasRenderingContext2D,
  env: EnvironmentGeometry,
  t: MapTransform,
) {
  ctx.save();
  tracePath(ctx, t, env.boundary);
  ctx.fillStyle = "#fafafa";
  ctx.fill();
  ctx.strokeStyle = "#333";
  ctx.lineWidth = 1.5;
  ctx.stroke();
  for (const ob of env.obstacles) {
    tracePath(ctx, t, ob);
    ctx.fillStyle = "#444";
    ctx.fill();
  }
  ctx.restore();
}

export function drawPoints(
  ctx: CanvasRenderingContext2D,
  points: number[][],
  t: MapTransform,
  colorOf: (index: number) => string,
  highlighted: Set<number>,
  anySelection: boolean,
) {
  ctx.save();
  points.forEach((p, i) => {
    const [cx, cy] = toCanvas(t, p);
    const hot = highlighted.has(i);
    ctx.globalAlpha = anySelection && !hot ? DIM_ALPHA : 1.0;
    ctx.fillStyle = hot ? HIGHLIGHT_COLOR : colorOf(i);
    ctx.beginPath();
    ctx.arc(cx, cy, hot ? 4.5 : 3.0, 0, 2 * Math.PI);
    ctx.fill();
  });
  ctx.restore();
}

export function drawMaps(
  physCanvas: HTMLCanvasElement,
  virtCanvas: HTMLCanvasElement,
  bundle: VizBundle,
  selection: Selection,
) {
  const maxScore = Math.max(...bundle.scores, 0);
  const physCtx = physCanvas.getContext("2d")!;
  const virtCtx = virtCanvas.getContext("2d")!;
  physCtx.clearRect(0, 0, physCanvas.width, physCanvas.height);
  virtCtx.clearRect(0, 0, virtCanvas.width, virtCanvas.height);

  const tPhys = fitTransform(bundle.env_phys.boundary, physCanvas.width, physCanvas.height);
  const tVirt = fitTransform(bundle.env_virt.boundary, virtCanvas.width, virtCanvas.height);
  drawEnvironment(physCtx, bundle.env_phys, tPhys);
  drawEnvironment(virtCtx, bundle.env_virt, tVirt);

  const any = selection.virtIndices.length > 0;
  drawPoints(
    virtCtx,
    bundle.virt_points,
    tVirt,
    (i) => colorForValue(bundle.scores[i], maxScore),
    new Set(selection.virtIndices),
    any,
  );
  drawPoints(
    physCtx,
    bundle.phys_points,
    tPhys,
    () => "#7f8c99",
    new Set(selection.physIndices),
    any,
  );
  return { tPhys, tVirt };
}

export function drawLasso(
  canvas: HTMLCanvasElement,
  t: MapTransform,
  lasso: number[][],
) {
  if (lasso.length < 2) return;
  const ctx = canvas.getContext("2d")!;
  ctx.save();
  ctx.strokeStyle = HIGHLIGHT_COLOR;
  ctx.setLineDash([5, 4]);
  ctx.lineWidth = 1.2;
  tracePath(ctx, t, lasso);
  ctx.stroke();
  ctx.restore();
}

export interface HistogramLayout {
  barRects: { x: number; y: number; w: number; h: number }[];
  plotTop: number;
  plotBottom: number;
}

export function drawHistogram(
  canvas: HTMLCanvasElement,
  bundle: VizBundle,
  activeBin: number | null,
): HistogramLayout {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const edges = bundle.histogram.bin_edges;
  const counts = binCounts(bundle.scores, edges);
  const maxCount = Math.max(...counts, 1);
  const padL = 34;
  const padB = 22;
  const padT = 8;
  const barW = (width - padL - 8) / counts.length;
  const rects = counts.map((c, i) => {
    const h = ((height - padB - padT) * c) / maxCount;
    return {
      x: padL + i * barW,
      y: height - padB - h,
      w: barW - 1,
      h,
    };
  });
  const maxScore = edges[edges.length - 1];
  rects.forEach((r, i) => {
    ctx.fillStyle =
      i === activeBin ? HIGHLIGHT_COLOR : colorForValue((edges[i] + edges[i + 1]) / 2, maxScore);
    ctx.fillRect(r.x, r.y, r.w, r.h);
  });
  ctx.fillStyle = "#333";
  ctx.font = "10px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText("0", padL, height - 8);
  ctx.textAlign = "right";
  ctx.fillText(maxScore.toFixed(1), width - 8, height - 8);
  ctx.save();
  ctx.translate(10, height / 2);
  ctx.rotate(-Math.PI / 2);
  ctx.textAlign = "center";
  ctx.fillText("count", 0, 0);
  ctx.restore();
  return { barRects: rects, plotTop: padT, plotBottom: height - padB };
}

/** Full columns are hoverable, not just the filled bar heights. */
export function hitTestBin(layout: HistogramLayout, x: number, y: number): number | null {
  if (y < layout.plotTop || y > layout.plotBottom) return null;
  for (let i = 0; i < layout.barRects.length; i++) {
    const r = layout.barRects[i];
    if (x >= r.x && x <= r.x + r.w) return i;
  }
  return null;
}

export function drawLegend(canvas: HTMLCanvasElement, maxScore: number) {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  for (let x = 0; x < width - 70; x++) {
    ctx.fillStyle = colorForValue(x, width - 71);
    ctx.fillRect(x + 4, 6, 1, height - 24);
  }
  ctx.fillStyle = "#333";
  ctx.font = "10px sans-serif";
  ctx.textAlign = "left";
  ctx.fillText("0", 4, height - 4);
  ctx.textAlign = "right";
  ctx.fillText(`${maxScore.toFixed(1)} m²`, width - 4, height - 4);
  ctx.fillText("incompatibility", width - 4, 14);
}
