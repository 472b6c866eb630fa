/** Checked-in figure style: nothing here depends on the environment. */

export const WIDTH = 640;
export const HEIGHT = 420;
export const MARGIN = { top: 36, right: 24, bottom: 48, left: 64 };

export const FONT = "12px sans-serif";
export const TITLE_FONT = "14px sans-serif";

// series palette keyed by (policy, prediction interval) insertion order
export const SERIES_COLORS = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
  "#bcbd22",
];

export const SERIES_MARKERS = ["circle", "square", "diamond", "triangle"] as const;

export const THRESHOLD_DASHES = ["2,3", "6,3", "6,3,2,3"]; // dotted, dashed, dash-dot
export const THRESHOLD_COLOR = "#555555";
export const GAMMA_COLOR = "#000000";
export const AXIS_COLOR = "#333333";
export const GRID_COLOR = "#dddddd";

// violation surface: white (0%) to deep red (100%)
export function heatColor(pct: number): string {
  const t = Math.max(0, Math.min(1, pct / 100));
  const lerp = (a: number, b: number) => Math.round(a + (b - a) * t);
  const r = lerp(255, 165);
  const g = lerp(245, 15);
  const b = lerp(240, 21);
  return `rgb(${r},${g},${b})`;
}

export function seriesLabel(policy: string, pd: number): string {
  if (pd === 0) return policy;
  return `${policy} ${pd}FP`;
}
