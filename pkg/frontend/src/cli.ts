#!/usr/bin/env node
/**
 * Usage: node dist/cli.js render <csv-file | directory> [--out <dir>]
 *
 * Renders every known scenario CSV found at the given path. Exits non-zero
 * (without writing a file) on schema drift or empty input.
 */

import { existsSync, readdirSync, statSync } from "fs";
import { join } from "path";

import { RECIPES } from "./recipes.js";
import { renderToFile } from "./render.js";

function main(argv: string[]): number {
  const args = argv.slice(2);
  if (args[0] !== "render" || args.length < 2) {
    console.error("usage: cli.js render <csv-or-dir> [--out <dir>]");
    return 2;
  }
  const target = args[1];
  let outDir = "figures";
  const flag = args.indexOf("--out");
  if (flag >= 0) {
    if (!args[flag + 1]) {
      console.error("--out needs a directory");
      return 2;
    }
    outDir = args[flag + 1];
  }
  if (!existsSync(target)) {
    console.error(`no such path: ${target}`);
    return 2;
  }
  const files = statSync(target).isDirectory()
    ? readdirSync(target)
        .filter((f) => f.endsWith(".csv") && RECIPES[f.replace(/\.csv$/, "")])
        .sort()
        .map((f) => join(target, f))
    : [target];
  if (files.length === 0) {
    console.error(`no scenario CSV files under ${target}`);
    return 1;
  }
  let failures = 0;
  for (const f of files) {
    try {
      const { path, fits } = renderToFile(f, outDir);
      const extra = Object.entries(fits)
        .map(([k, v]) => `${k}=${v.toFixed(2)}`)
        .join(" ");
      console.log(`rendered ${path}${extra ? `  [${extra}]` : ""}`);
    } catch (err) {
      failures += 1;
      console.error(`FAILED ${f}: ${(err as Error).message}`);
    }
  }
  return failures > 0 ? 1 : 0;
}

process.exit(main(process.argv));
