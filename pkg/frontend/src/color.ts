/** Perceptually uniform colormap (viridis control points, linear blend). */

const STOPS: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colorForValue(value: number, max: number): string {
  const t = max > 0 ? Math.min(Math.max(value / max, 0), 1) : 0;
  const x = t * (STOPS.length - 1);
  const k = Math.min(Math.floor(x), STOPS.length - 2);
  const f = x - k;
  const a = STOPS[k];
  const b = STOPS[k + 1];
  const mix = (i: number) => Math.round(a[i] + (b[i] - a[i]) * f);
  return `rgb(${mix(0)}, ${mix(1)}, ${mix(2)})`;
}

export const HIGHLIGHT_COLOR = "#ff3b30";
export const DIM_ALPHA = 0.25;
