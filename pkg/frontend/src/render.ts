/**
 * Batch rendering: scenario CSV in, deterministic SVG out. Rendering is
 * pure (no timestamps, fixed precision), so identical CSV bytes produce
 * identical image bytes.
 */

import { mkdirSync, writeFileSync } from "fs";
import { basename, join } from "path";

import { RECIPES, Rendered } from "./recipes.js";
import { readScenarioCsv } from "./schema.js";

export function renderCsv(csvPath: string): Rendered {
  const id = basename(csvPath).replace(/\.csv$/, "");
  const recipe = RECIPES[id];
  if (!recipe) {
    throw new Error(`no recipe for scenario '${id}'`);
  }
  const rows = readScenarioCsv(csvPath);
  return recipe(rows);
}

export function renderToFile(csvPath: string, outDir: string): { path: string; fits: Record<string, number> } {
  const id = basename(csvPath).replace(/\.csv$/, "");
  const out = renderCsv(csvPath);
  mkdirSync(outDir, { recursive: true });
  const path = join(outDir, `${id}.svg`);
  writeFileSync(path, out.svg);
  return { path, fits: out.fits };
}
