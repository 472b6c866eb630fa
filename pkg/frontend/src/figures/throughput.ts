import { legend, marker, plotFrame, polyline } from "../chart.js";
import { SERIES_COLORS, SERIES_MARKERS, WIDTH, MARGIN, seriesLabel } from "../style.js";
import { svgDocument } from "../svg.js";
import { FigureSpec } from "../types.js";
import { domainOf, loadPointSeries } from "./series.js";
import { HEIGHT } from "../style.js";

/** Delay-reliable throughput (%) vs number of XR users, one line per scheme. */
export function renderThroughput(spec: FigureSpec): string {
  const series = loadPointSeries(spec.input, "mean_reliable_fraction", spec.policy).map((s) => ({
    ...s,
    points: s.points.map(([n, v]) => [n, 100 * v] as [number, number]),
  }));
  const dom = domainOf(series);
  const frame = plotFrame(
    dom.x,
    [0, 105],
    "number of XR users",
    "delay-reliable throughput (%)",
    spec.title ?? "Delay-reliable throughput vs users",
  );
  const entries: Array<[string, string]> = [];
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const shape = SERIES_MARKERS[i % SERIES_MARKERS.length];
    frame.body.push(polyline(s.points.map(([n, v]) => [frame.x(n), frame.y(v)]), color));
    for (const [n, v] of s.points) frame.body.push(marker(shape, frame.x(n), frame.y(v), color));
    entries.push([seriesLabel(s.policy, s.pd), color]);
  });
  frame.body.push(...legend(entries, WIDTH - MARGIN.right, MARGIN.top + 10));
  return svgDocument(WIDTH, HEIGHT, frame.body);
}
