import fs from "node:fs";
import path from "node:path";

import { readArtifact, column, type Artifact, type ArtifactType } from "./artifacts.js";
import type { FigureRecipe } from "./recipe.js";
import { renderFigureSvg, type PlotPanel } from "./svg.js";

/** Build the SVG for a recipe. Inputs are only read, never written. */
export function renderFigure(recipe: FigureRecipe): string {
  const cache = new Map<string, Artifact>();
  const load = (file: string, type: ArtifactType) => {
    const key = `${type}:${file}`;
    let artifact = cache.get(key);
    if (artifact === undefined) {
      artifact = readArtifact(file, type);
      cache.set(key, artifact);
    }
    return artifact;
  };

  const panels: PlotPanel[] = recipe.panels.map((panel) => ({
    xLabel: panel.xLabel,
    yLabel: panel.yLabel,
    xScale: panel.xScale,
    yScale: panel.yScale,
    series: panel.series.map((s) => {
      const artifact = load(s.path, panel.artifact as ArtifactType);
      return {
        x: column(artifact, panel.xColumn),
        y: column(artifact, s.yColumn),
        style: s.style,
        label: s.label,
      };
    }),
  }));
  return renderFigureSvg(panels, recipe.columns, recipe.title ?? recipe.id);
}

export function renderToFile(recipe: FigureRecipe, outFile: string): void {
  const svg = renderFigure(recipe);
  fs.mkdirSync(path.dirname(path.resolve(outFile)), { recursive: true });
  fs.writeFileSync(outFile, svg);
}
