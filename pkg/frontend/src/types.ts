import { z } from "zod";

export const FIGURE_KINDS = [
  "throughput_curve",
  "satisfied_bar",
  "mse_curves",
  "violation_surface",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export const FigureSpecSchema = z
  .object({
    kind: z.enum(FIGURE_KINDS),
    input: z.string(), // sweep_points.csv (curves/bars) or sweep_users.csv (surface)
    crossover: z.string().optional(), // crossover.json, mse_curves only
    thresholds: z.array(z.number()).default([]),
    policy: z.string().optional(), // filter series to one scheduler
    output: z.string(),
    format: z.enum(["svg", "png"]).default("svg"),
    title: z.string().optional(),
  })
  .strict();

export type FigureSpec = z.infer<typeof FigureSpecSchema>;

export const CrossoverFileSchema = z.object({
  thresholds: z.array(z.number()),
  policies: z.record(
    z.object({
      gamma_points: z.array(
        z.object({
          pair: z.tuple([z.number(), z.number()]),
          user_count: z.number().nullable(),
        }),
      ),
      c_points: z.array(
        z.object({
          mse_threshold: z.number(),
          prediction_interval: z.number(),
          max_users: z.number().nullable(),
        }),
      ),
    }),
  ),
});

export type CrossoverFile = z.infer<typeof CrossoverFileSchema>;

/** Raised for bad inputs: missing columns, empty data, unsupported formats. */
export class FigureError extends Error {}
