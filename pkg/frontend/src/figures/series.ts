import { Row, loadCsv, num } from "../csv.js";
import { FigureError } from "../types.js";

export interface Series {
  policy: string;
  pd: number;
  points: Array<[number, number]>; // [num_users, value]
}

const POINT_COLUMNS = ["policy", "prediction_interval", "num_users"];

/** Group sweep_points.csv rows into per-(policy, prediction-interval) curves. */
export function loadPointSeries(path: string, valueColumn: string, policy?: string): Series[] {
  const rows = loadCsv(path, [...POINT_COLUMNS, valueColumn]);
  const groups = new Map<string, { policy: string; pd: number; pts: Array<[number, number]> }>();
  for (const row of rows) {
    if (policy && row.policy !== policy) continue;
    const v = num(row, valueColumn);
    const n = num(row, "num_users");
    if (v === null || n === null) continue; // absent points stay gaps
    const pd = Number(row.prediction_interval);
    const key = `${row.policy}|${pd}`;
    if (!groups.has(key)) groups.set(key, { policy: row.policy, pd, pts: [] });
    groups.get(key)!.pts.push([n, v]);
  }
  const series = [...groups.values()]
    .map((g) => ({
      policy: g.policy,
      pd: g.pd,
      points: g.pts.sort((a, b) => a[0] - b[0]),
    }))
    .sort((a, b) => (a.policy === b.policy ? a.pd - b.pd : a.policy < b.policy ? -1 : 1));
  if (series.length === 0) {
    throw new FigureError(`${path}: no data rows for column ${valueColumn}` + (policy ? ` and policy ${policy}` : ""));
  }
  return series;
}

export function domainOf(series: Series[], pad = 0.05): { x: [number, number]; y: [number, number] } {
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yHi = Math.max(...ys);
  return { x: [xLo, xHi], y: [0, yHi <= 0 ? 1 : yHi * (1 + pad)] };
}

export { Row };
