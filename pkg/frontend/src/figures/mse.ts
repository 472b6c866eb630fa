import { readFileSync } from "fs";
import { escapeText, legend, marker, plotFrame, polyline } from "../chart.js";
import {
  FONT,
  GAMMA_COLOR,
  HEIGHT,
  MARGIN,
  SERIES_COLORS,
  SERIES_MARKERS,
  THRESHOLD_COLOR,
  THRESHOLD_DASHES,
  WIDTH,
} from "../style.js";
import { el, svgDocument } from "../svg.js";
import { CrossoverFile, CrossoverFileSchema, FigureError, FigureSpec } from "../types.js";
import { domainOf, loadPointSeries, Series } from "./series.js";

/** MSE vs user count per prediction interval, with horizontal tolerable-MSE
 * lines and the gamma/c intersection markers from crossover.json. */
export function renderMseCurves(spec: FigureSpec): string {
  const policy = spec.policy ?? "PF";
  const series = loadPointSeries(spec.input, "mean_mse", policy);
  const cross = spec.crossover ? loadCrossover(spec.crossover, policy) : null;

  const dom = domainOf(series);
  const yHi = Math.max(dom.y[1], ...spec.thresholds.map((t) => t * 1.3));
  const frame = plotFrame(
    dom.x,
    [0, yHi],
    "number of XR users",
    "mean squared error",
    spec.title ?? `Prediction error vs users (${policy})`,
  );

  spec.thresholds.forEach((t, i) => {
    frame.body.push(
      polyline(
        [
          [frame.x.range[0], frame.y(t)],
          [frame.x.range[1], frame.y(t)],
        ],
        THRESHOLD_COLOR,
        THRESHOLD_DASHES[i % THRESHOLD_DASHES.length],
      ),
      el(
        "text",
        { x: frame.x.range[1] - 4, y: frame.y(t) - 4, "text-anchor": "end", style: `font:${FONT}`, fill: THRESHOLD_COLOR },
        [],
        `mse=${t}`,
      ),
    );
  });

  const entries: Array<[string, string]> = [];
  series.forEach((s, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const shape = SERIES_MARKERS[i % SERIES_MARKERS.length];
    frame.body.push(polyline(s.points.map(([n, v]) => [frame.x(n), frame.y(v)]), color));
    for (const [n, v] of s.points) frame.body.push(marker(shape, frame.x(n), frame.y(v), color));
    entries.push([s.pd === 0 ? "no prediction" : `${s.pd}-frame prediction`, color]);
  });
  frame.body.push(...legend(entries, WIDTH - MARGIN.right, MARGIN.top + 10));

  if (cross) {
    frame.body.push(...gammaMarkers(cross, series, frame));
    frame.body.push(...cPointMarkers(cross, spec.thresholds, frame));
  }
  return svgDocument(WIDTH, HEIGHT, frame.body);
}

function loadCrossover(path: string, policy: string): CrossoverFile["policies"][string] | null {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf-8"));
  } catch (e) {
    throw new FigureError(`cannot read crossover file ${path}: ${(e as Error).message}`);
  }
  const parsed = CrossoverFileSchema.safeParse(raw);
  if (!parsed.success) {
    throw new FigureError(`${path} is not a crossover report: ${parsed.error.issues[0]?.message}`);
  }
  return parsed.data.policies[policy] ?? null;
}

function interp(points: Array<[number, number]>, x: number): number | null {
  for (let i = 1; i < points.length; i++) {
    const [x0, y0] = points[i - 1];
    const [x1, y1] = points[i];
    if (x0 <= x && x <= x1) {
      const f = x1 === x0 ? 0 : (x - x0) / (x1 - x0);
      return y0 + f * (y1 - y0);
    }
  }
  return null;
}

function gammaMarkers(
  cross: NonNullable<ReturnType<typeof loadCrossover>>,
  series: Series[],
  frame: ReturnType<typeof plotFrame>,
): string[] {
  const byPd = new Map(series.map((s) => [s.pd, s.points]));
  const out: string[] = [];
  let n = 0;
  for (const g of cross.gamma_points) {
    if (g.user_count === null) continue;
    const pts = byPd.get(g.pair[0]);
    const y = pts ? interp(pts, g.user_count) : null;
    if (y === null) continue;
    n += 1;
    const cx = frame.x(g.user_count);
    const cy = frame.y(y);
    out.push(
      el("line", { x1: cx, y1: frame.y.range[0], x2: cx, y2: cy, stroke: GAMMA_COLOR, "stroke-dasharray": "2,2", "stroke-width": 1, class: "gamma-marker" }),
      el("circle", { cx, cy, r: 5, fill: "none", stroke: GAMMA_COLOR, "stroke-width": 1.5, class: "gamma-marker" }),
      el("text", { x: cx + 6, y: cy - 8, style: `font:${FONT}`, fill: GAMMA_COLOR }, [], escapeText(`gamma${n}`)),
    );
  }
  return out;
}

function cPointMarkers(
  cross: NonNullable<ReturnType<typeof loadCrossover>>,
  thresholds: number[],
  frame: ReturnType<typeof plotFrame>,
): string[] {
  const out: string[] = [];
  let n = 0;
  for (const c of cross.c_points) {
    if (c.max_users === null) continue;
    if (thresholds.length > 0 && !thresholds.includes(c.mse_threshold)) continue;
    n += 1;
    const cx = frame.x(c.max_users);
    const cy = frame.y(c.mse_threshold);
    out.push(
      el("polygon", {
        points: `${cx.toFixed(2)},${(cy - 5).toFixed(2)} ${(cx + 5).toFixed(2)},${(cy + 5).toFixed(2)} ${(cx - 5).toFixed(2)},${(cy + 5).toFixed(2)}`,
        fill: "none",
        stroke: GAMMA_COLOR,
        "stroke-width": 1.2,
        class: "c-marker",
      }),
    );
  }
  return out;
}
