import fs from "node:fs";
import path from "node:path";
import { z } from "zod";

import { ARTIFACT_HEADERS } from "./artifacts.js";

const seriesSchema = z.object({
  path: z.string(),
  yColumn: z.string(),
  style: z.enum(["solid", "dashed", "dashdot"]),
  label: z.string().optional(),
});

const panelSchema = z.object({
  artifact: z.enum(Object.keys(ARTIFACT_HEADERS) as [string, ...string[]]),
  xColumn: z.string(),
  xLabel: z.string().optional(),
  yLabel: z.string().optional(),
  xScale: z.enum(["linear", "log"]).default("linear"),
  yScale: z.enum(["linear", "log"]).default("linear"),
  series: z.array(seriesSchema).min(1),
});

const recipeSchema = z.object({
  id: z.string(),
  title: z.string().optional(),
  columns: z.number().int().min(1).default(1),
  panels: z.array(panelSchema).min(1),
});

export type Series = z.infer<typeof seriesSchema>;
export type Panel = z.infer<typeof panelSchema>;
export type FigureRecipe = z.infer<typeof recipeSchema>;

export class RecipeError extends Error {}

export function parseRecipe(raw: unknown): FigureRecipe {
  const result = recipeSchema.safeParse(raw);
  if (!result.success) {
    const lines = result.error.issues.map(
      (issue) => `${issue.path.join(".") || "(root)"}: ${issue.message}`,
    );
    throw new RecipeError(`invalid recipe:\n${lines.join("\n")}`);
  }
  return result.data;
}

/**
 * Load a recipe file and resolve series paths relative to its directory,
 * unless an explicit input directory is given.
 */
export function loadRecipe(file: string, inputsDir?: string): FigureRecipe {
  let raw: unknown;
  try {
    raw = JSON.parse(fs.readFileSync(file, "utf8"));
  } catch (err) {
    throw new RecipeError(`cannot read recipe ${file}: ${(err as Error).message}`);
  }
  const recipe = parseRecipe(raw);
  const base = inputsDir ?? path.dirname(file);
  for (const panel of recipe.panels) {
    for (const series of panel.series) {
      if (!path.isAbsolute(series.path)) {
        series.path = path.join(base, series.path);
      }
    }
  }
  return recipe;
}
