import { ArtifactError } from "./artifacts.js";
import { loadRecipe, RecipeError } from "./recipe.js";
import { renderToFile } from "./render.js";

const USAGE = "usage: render --recipe <recipe.json> --out <figure.svg> [--inputs <dir>]";

function getFlag(args: string[], name: string): string | undefined {
  const i = args.indexOf(name);
  if (i < 0) return undefined;
  const v = args[i + 1];
  if (v === undefined || v.startsWith("--")) {
    throw new RecipeError(`${name} needs a value\n${USAGE}`);
  }
  return v;
}

export function main(argv: string[]): number {
  try {
    if (argv[0] !== "render") {
      console.error(USAGE);
      return 2;
    }
    const args = argv.slice(1);
    const recipePath = getFlag(args, "--recipe");
    const outPath = getFlag(args, "--out");
    if (recipePath === undefined || outPath === undefined) {
      console.error(USAGE);
      return 2;
    }
    const recipe = loadRecipe(recipePath, getFlag(args, "--inputs"));
    renderToFile(recipe, outPath);
    console.log(`wrote ${outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof ArtifactError || err instanceof RecipeError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

process.exit(main(process.argv.slice(2)));
