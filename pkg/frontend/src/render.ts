import { writeFileSync } from "fs";
import { renderMseCurves } from "./figures/mse.js";
import { renderSatisfiedBar } from "./figures/satisfied.js";
import { renderViolationSurface } from "./figures/surface.js";
import { renderThroughput } from "./figures/throughput.js";
import { FigureError, FigureSpec, FigureSpecSchema } from "./types.js";

/** Render one figure spec to an SVG string (inputs are read-only). */
export function renderFigure(spec: FigureSpec): string {
  if (spec.format !== "svg") {
    throw new FigureError(
      `format ${spec.format!} is not supported: this renderer emits vector SVG only`,
    );
  }
  switch (spec.kind) {
    case "throughput_curve":
      return renderThroughput(spec);
    case "satisfied_bar":
      return renderSatisfiedBar(spec);
    case "mse_curves":
      return renderMseCurves(spec);
    case "violation_surface":
      return renderViolationSurface(spec);
  }
}

export function renderToFile(specInput: unknown): string {
  const parsed = FigureSpecSchema.safeParse(specInput);
  if (!parsed.success) {
    const issue = parsed.error.issues[0];
    throw new FigureError(`invalid figure spec: ${issue.path.join(".")}: ${issue.message}`);
  }
  const spec = parsed.data;
  if (spec.thresholds.length > 0 && spec.kind !== "mse_curves") {
    throw new FigureError("thresholds are only valid for mse_curves figures");
  }
  const svg = renderFigure(spec);
  writeFileSync(spec.output, svg, "utf-8");
  return spec.output;
}
