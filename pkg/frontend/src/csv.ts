import { readFileSync } from "fs";
import Papa from "papaparse";
import { FigureError } from "./types.js";

export type Row = Record<string, string>;

/** Load a CSV produced by the simulator CLI, checking required columns. */
export function loadCsv(path: string, required: string[]): Row[] {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (e) {
    throw new FigureError(`cannot read input ${path}: ${(e as Error).message}`);
  }
  const parsed = Papa.parse<Row>(text, { header: true, skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new FigureError(`CSV parse error in ${path}: ${first.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = required.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new FigureError(`${path} is missing required columns: ${missing.join(", ")}`);
  }
  return parsed.data;
}

export function num(row: Row, col: string): number | null {
  const raw = row[col];
  if (raw === undefined || raw === "") return null;
  const v = Number(raw);
  return Number.isFinite(v) ? v : null;
}
