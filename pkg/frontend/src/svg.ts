/** Minimal deterministic SVG assembly: fixed attribute order, fixed number
 * formatting, no ids or timestamps, so identical inputs give identical bytes. */

export function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function el(
  tag: string,
  attrs: Record<string, string | number>,
  children: string[] = [],
  text?: string,
): string {
  const parts = Object.entries(attrs).map(
    ([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`,
  );
  const open = parts.length ? `<${tag} ${parts.join(" ")}` : `<${tag}`;
  if (children.length === 0 && text === undefined) return `${open}/>`;
  return `${open}>${text ?? ""}${children.join("")}</${tag}>`;
}

export function svgDocument(width: number, height: number, children: string[]): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    children.join("") +
    `</svg>\n`
  );
}

export interface LinearScale {
  (v: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): LinearScale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as LinearScale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round-valued ticks covering the domain, at most `count` of them. */
export function ticks(domain: [number, number], count: number): number[] {
  const [lo, hi] = domain;
  const span = hi - lo || 1;
  const rawStep = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    out.push(Number(t.toFixed(10)));
  }
  return out;
}
