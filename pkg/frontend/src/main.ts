import {
  drawHistogram,
  drawLasso,
  drawLegend,
  drawMaps,
  hitTestBin,
  toWorld,
  type HistogramLayout,
  type MapTransform,
} from "./render.js";
import { binSelect, emptySelection, lassoSelect } from "./selection.js";
import type { Selection, VizBundle } from "./types.js";
import { validateBundle } from "./validate.js";

interface AppState {
  bundle: VizBundle | null;
  selection: Selection;
  lassoPath: number[][];
  lassoActive: boolean;
  tVirt: MapTransform | null;
  histLayout: HistogramLayout | null;
}

const state: AppState = {
  bundle: null,
  selection: emptySelection(),
  lassoPath: [],
  lassoActive: false,
  tVirt: null,
  histLayout: null,
};

const $ = (id: string) => document.getElementById(id)!;
const physCanvas = $("phys-map") as HTMLCanvasElement;
const virtCanvas = $("virt-map") as HTMLCanvasElement;
const histCanvas = $("histogram") as HTMLCanvasElement;
const legendCanvas = $("legend") as HTMLCanvasElement;
const errorPanel = $("error-panel");
const statsLine = $("stats");

function showError(message: string) {
  errorPanel.textContent = message;
  errorPanel.classList.remove("hidden");
}

function clearError() {
  errorPanel.textContent = "";
  errorPanel.classList.add("hidden");
}

function redraw() {
  if (!state.bundle) return;
  const { tVirt } = drawMaps(physCanvas, virtCanvas, state.bundle, state.selection);
  state.tVirt = tVirt;
  if (state.lassoPath.length > 1) drawLasso(virtCanvas, tVirt, state.lassoPath);
  state.histLayout = drawHistogram(histCanvas, state.bundle, state.selection.activeBin);
  drawLegend(legendCanvas, Math.max(...state.bundle.scores, 0));
  const n = state.bundle.virt_points.length;
  const sel = state.selection.virtIndices.length;
  statsLine.textContent =
    `n=${n}  mean=${state.bundle.mean.toFixed(3)}  std=${state.bundle.std.toFixed(3)}` +
    (sel ? `  selected=${sel} (${state.selection.physIndices.length} physical)` : "");
}

function loadBundleText(text: string) {
  try {
    state.bundle = validateBundle(JSON.parse(text));
    state.selection = emptySelection();
    state.lassoPath = [];
    clearError();
    redraw();
  } catch (err) {
    state.bundle = null;
    showError(`could not load bundle: ${err instanceof Error ? err.message : String(err)}`);
  }
}

($("file-input") as HTMLInputElement).addEventListener("change", (ev) => {
  const file = (ev.target as HTMLInputElement).files?.[0];
  if (!file) return;
  file.text().then(loadBundleText, (err) => showError(String(err)));
});

virtCanvas.addEventListener("pointerdown", (ev) => {
  if (!state.bundle || !state.tVirt) return;
  state.lassoActive = true;
  state.lassoPath = [canvasPoint(ev)];
  virtCanvas.setPointerCapture(ev.pointerId);
});

virtCanvas.addEventListener("pointermove", (ev) => {
  if (!state.lassoActive) return;
  state.lassoPath.push(canvasPoint(ev));
  redraw();
});

virtCanvas.addEventListener("pointerup", () => {
  if (!state.bundle || !state.lassoActive) return;
  state.lassoActive = false;
  const result = lassoSelect(state.bundle, state.lassoPath);
  state.lassoPath = [];
  if (result !== null) state.selection = result;
  redraw();
});

function canvasPoint(ev: PointerEvent): number[] {
  const rect = virtCanvas.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) * virtCanvas.width) / rect.width;
  const y = ((ev.clientY - rect.top) * virtCanvas.height) / rect.height;
  return [...toWorld(state.tVirt!, x, y)];
}

histCanvas.addEventListener("pointermove", (ev) => {
  if (!state.bundle || !state.histLayout) return;
  const rect = histCanvas.getBoundingClientRect();
  const x = ((ev.clientX - rect.left) * histCanvas.width) / rect.width;
  const y = ((ev.clientY - rect.top) * histCanvas.height) / rect.height;
  const bin = hitTestBin(state.histLayout, x, y);
  if (bin !== state.selection.activeBin) {
    state.selection = bin === null ? emptySelection() : binSelect(state.bundle, bin);
    redraw();
  }
});

histCanvas.addEventListener("pointerleave", () => {
  if (!state.bundle) return;
  if (state.selection.activeBin !== null) {
    state.selection = emptySelection();
    redraw();
  }
});

$("clear-selection").addEventListener("click", () => {
  state.selection = emptySelection();
  state.lassoPath = [];
  redraw();
});
