import { AXIS_COLOR, FONT, GRID_COLOR, HEIGHT, MARGIN, TITLE_FONT, WIDTH } from "./style.js";
import { LinearScale, el, fmt, linearScale, ticks } from "./svg.js";

export interface Frame {
  x: LinearScale;
  y: LinearScale;
  body: string[];
}

export function plotFrame(
  xDomain: [number, number],
  yDomain: [number, number],
  xLabel: string,
  yLabel: string,
  title?: string,
  opts: { xTicks?: boolean } = {},
): Frame {
  const x = linearScale(xDomain, [MARGIN.left, WIDTH - MARGIN.right]);
  const y = linearScale(yDomain, [HEIGHT - MARGIN.bottom, MARGIN.top]);
  const body: string[] = [];
  body.push(el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#ffffff" }));

  for (const t of opts.xTicks === false ? [] : ticks(xDomain, 8)) {
    body.push(
      el("line", { x1: x(t), y1: y.range[0], x2: x(t), y2: y.range[1], stroke: GRID_COLOR, "stroke-width": 0.5 }),
      el("text", { x: x(t), y: y.range[0] + 16, "text-anchor": "middle", style: `font:${FONT}`, fill: AXIS_COLOR }, [], fmt(t).replace(/\.00$/, "")),
    );
  }
  for (const t of ticks(yDomain, 6)) {
    body.push(
      el("line", { x1: x.range[0], y1: y(t), x2: x.range[1], y2: y(t), stroke: GRID_COLOR, "stroke-width": 0.5 }),
      el("text", { x: x.range[0] - 6, y: y(t) + 4, "text-anchor": "end", style: `font:${FONT}`, fill: AXIS_COLOR }, [], trimTick(t)),
    );
  }
  body.push(
    el("line", { x1: x.range[0], y1: y.range[0], x2: x.range[1], y2: y.range[0], stroke: AXIS_COLOR }),
    el("line", { x1: x.range[0], y1: y.range[0], x2: x.range[0], y2: y.range[1], stroke: AXIS_COLOR }),
    el("text", { x: (x.range[0] + x.range[1]) / 2, y: HEIGHT - 10, "text-anchor": "middle", style: `font:${FONT}`, fill: AXIS_COLOR }, [], xLabel),
    el(
      "text",
      {
        x: 16,
        y: (y.range[0] + y.range[1]) / 2,
        "text-anchor": "middle",
        style: `font:${FONT}`,
        fill: AXIS_COLOR,
        transform: `rotate(-90 16 ${fmt((y.range[0] + y.range[1]) / 2)})`,
      },
      [],
      yLabel,
    ),
  );
  if (title) {
    body.push(
      el("text", { x: WIDTH / 2, y: 20, "text-anchor": "middle", style: `font:${TITLE_FONT}`, fill: AXIS_COLOR }, [], escapeText(title)),
    );
  }
  return { x, y, body };
}

export function polyline(pts: Array<[number, number]>, color: string, dash?: string): string {
  const attrs: Record<string, string | number> = {
    points: pts.map(([px, py]) => `${fmt(px)},${fmt(py)}`).join(" "),
    fill: "none",
    stroke: color,
    "stroke-width": 1.5,
  };
  if (dash) attrs["stroke-dasharray"] = dash;
  return el("polyline", attrs);
}

export function marker(shape: string, cx: number, cy: number, color: string, size = 4): string {
  switch (shape) {
    case "square":
      return el("rect", { x: cx - size, y: cy - size, width: 2 * size, height: 2 * size, fill: color });
    case "diamond":
      return el("polygon", {
        points: `${fmt(cx)},${fmt(cy - size)} ${fmt(cx + size)},${fmt(cy)} ${fmt(cx)},${fmt(cy + size)} ${fmt(cx - size)},${fmt(cy)}`,
        fill: color,
      });
    case "triangle":
      return el("polygon", {
        points: `${fmt(cx)},${fmt(cy - size)} ${fmt(cx + size)},${fmt(cy + size)} ${fmt(cx - size)},${fmt(cy + size)}`,
        fill: color,
      });
    default:
      return el("circle", { cx, cy, r: size, fill: color });
  }
}

export function legend(entries: Array<[string, string]>, xRight: number, yTop: number): string[] {
  const out: string[] = [];
  entries.forEach(([label, color], i) => {
    const y = yTop + i * 16;
    out.push(
      el("line", { x1: xRight - 120, y1: y, x2: xRight - 96, y2: y, stroke: color, "stroke-width": 2 }),
      el("text", { x: xRight - 90, y: y + 4, style: `font:${FONT}`, fill: AXIS_COLOR }, [], escapeText(label)),
    );
  });
  return out;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function trimTick(t: number): string {
  return Math.abs(t) >= 1 || t === 0 ? fmt(t).replace(/\.00$/, "") : String(t);
}
