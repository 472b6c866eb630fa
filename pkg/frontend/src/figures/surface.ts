import { loadCsv, num } from "../csv.js";
import { escapeText, plotFrame } from "../chart.js";
import { AXIS_COLOR, FONT, HEIGHT, MARGIN, WIDTH, heatColor } from "../style.js";
import { el, svgDocument } from "../svg.js";
import { FigureError, FigureSpec } from "../types.js";

const SINR_BIN_DB = 2.0;

/** Per-user delay-violation percentage vs (SINR bin, other-user count) from
 * sweep_users.csv.  Cells with no samples stay blank, never zero. */
export function renderViolationSurface(spec: FigureSpec): string {
  const rows = loadCsv(spec.input, ["num_users", "sinr_db", "violation_pct"]);
  const filtered = spec.policy ? rows.filter((r) => r.policy === spec.policy) : rows;
  const cells = new Map<string, { sum: number; n: number; bin: number; others: number }>();
  for (const row of filtered) {
    const v = num(row, "violation_pct");
    const sinr = num(row, "sinr_db");
    const users = num(row, "num_users");
    if (v === null || sinr === null || users === null) continue;
    const bin = Math.floor(sinr / SINR_BIN_DB);
    const others = users - 1;
    const key = `${bin}|${others}`;
    const cell = cells.get(key) ?? { sum: 0, n: 0, bin, others };
    cell.sum += v;
    cell.n += 1;
    cells.set(key, cell);
  }
  if (cells.size === 0) {
    throw new FigureError(`${spec.input}: no violation samples to plot`);
  }
  const bins = [...cells.values()];
  const binLo = Math.min(...bins.map((c) => c.bin));
  const binHi = Math.max(...bins.map((c) => c.bin)) + 1;
  const otherLo = Math.min(...bins.map((c) => c.others));
  const otherHi = Math.max(...bins.map((c) => c.others)) + 1;

  const frame = plotFrame(
    [binLo * SINR_BIN_DB, binHi * SINR_BIN_DB],
    [otherLo, otherHi],
    "SINR (dB)",
    "number of other XR users",
    spec.title ?? "Delay violation percentage",
  );
  for (const cell of bins.sort((a, b) => a.bin - b.bin || a.others - b.others)) {
    const x0 = frame.x(cell.bin * SINR_BIN_DB);
    const x1 = frame.x((cell.bin + 1) * SINR_BIN_DB);
    const y0 = frame.y(cell.others + 1);
    const y1 = frame.y(cell.others);
    frame.body.push(
      el("rect", {
        x: x0,
        y: y0,
        width: x1 - x0,
        height: y1 - y0,
        fill: heatColor(cell.sum / cell.n),
        stroke: "#ffffff",
        "stroke-width": 0.5,
        class: "surface-cell",
      }),
    );
  }
  // simple color bar
  const barX = WIDTH - MARGIN.right - 14;
  for (let i = 0; i < 10; i++) {
    const pct = 100 - i * 10;
    frame.body.push(
      el("rect", {
        x: barX,
        y: MARGIN.top + i * 12,
        width: 10,
        height: 12,
        fill: heatColor(pct - 5),
      }),
    );
  }
  frame.body.push(
    el("text", { x: barX - 4, y: MARGIN.top + 9, "text-anchor": "end", style: `font:${FONT}`, fill: AXIS_COLOR }, [], "100%"),
    el("text", { x: barX - 4, y: MARGIN.top + 123, "text-anchor": "end", style: `font:${FONT}`, fill: AXIS_COLOR }, [], "0%"),
  );
  return svgDocument(WIDTH, HEIGHT, frame.body);
}
