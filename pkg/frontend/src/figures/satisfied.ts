import { plotFrame, escapeText } from "../chart.js";
import { AXIS_COLOR, FONT, HEIGHT, MARGIN, SERIES_COLORS, WIDTH, seriesLabel } from "../style.js";
import { el, svgDocument } from "../svg.js";
import { FigureSpec } from "../types.js";
import { loadPointSeries } from "./series.js";

/** Supported XR users per scheme: the best mean satisfied count over the
 * swept user-count grid, as a bar chart. */
export function renderSatisfiedBar(spec: FigureSpec): string {
  const series = loadPointSeries(spec.input, "mean_satisfied_users", spec.policy);
  const bars = series.map((s) => ({
    label: seriesLabel(s.policy, s.pd),
    value: Math.max(...s.points.map(([, v]) => v)),
  }));
  const yMax = Math.max(1, ...bars.map((b) => b.value)) * 1.15;
  const frame = plotFrame(
    [0, bars.length],
    [0, yMax],
    "",
    "satisfied XR users",
    spec.title ?? "Satisfied XR users per scheme",
    { xTicks: false },
  );
  const slot = (frame.x.range[1] - frame.x.range[0]) / bars.length;
  bars.forEach((bar, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const cx = frame.x.range[0] + slot * (i + 0.5);
    const w = slot * 0.55;
    const yTop = frame.y(bar.value);
    frame.body.push(
      el("rect", { x: cx - w / 2, y: yTop, width: w, height: frame.y.range[0] - yTop, fill: color }),
      el("text", { x: cx, y: yTop - 5, "text-anchor": "middle", style: `font:${FONT}`, fill: AXIS_COLOR }, [], bar.value.toFixed(1)),
      el("text", { x: cx, y: frame.y.range[0] + 16, "text-anchor": "middle", style: `font:${FONT}`, fill: AXIS_COLOR }, [], escapeText(bar.label)),
    );
  });
  return svgDocument(WIDTH, HEIGHT, frame.body);
}
