import { existsSync, mkdtempSync, readFileSync, readdirSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { RECIPES } from "../src/recipes.js";
import { renderCsv, renderToFile } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");

const scenarioIds = readdirSync(FIXTURES)
  .filter((f) => f.endsWith(".csv"))
  .map((f) => f.replace(/\.csv$/, ""))
  .sort();

describe("batch rendering", () => {
  it("has a recipe for all 13 scenarios and fixtures for each", () => {
    expect(Object.keys(RECIPES).sort()).toEqual(scenarioIds);
    expect(scenarioIds).toHaveLength(13);
  });

  for (const id of scenarioIds) {
    it(`renders ${id} without error`, () => {
      const out = renderCsv(join(FIXTURES, `${id}.csv`));
      expect(out.svg.startsWith("<svg")).toBe(true);
      expect(out.svg).toContain("</svg>");
      expect(out.svg.length).toBeGreaterThan(500);
      expect(out.svg).not.toContain("NaN");
      expect(out.svg).not.toContain("Infinity");
    });
  }

  it("is deterministic: same CSV in, identical bytes out", () => {
    for (const id of ["fig2a", "fig3a", "figS2"]) {
      const a = renderCsv(join(FIXTURES, `${id}.csv`)).svg;
      const b = renderCsv(join(FIXTURES, `${id}.csv`)).svg;
      expect(a).toBe(b);
    }
  });

  it("writes one image per scenario", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const { path } = renderToFile(join(FIXTURES, "fig1b.csv"), dir);
    const svg = readFileSync(path, "utf8");
    expect(svg).toContain("transmission");
  });

  it("guide-line exponents match the producing pipeline's fits", () => {
    // frozen values computed on these fixtures with the Python fit_scaling
    const expected: Record<string, [string, number]> = {
      fig2c: ["weak-branch", 3.770191],
      fig3a: ["1/N^2", -2.151331],
      fig3c: ["1/N^2", -1.638346],
    };
    for (const [id, [key, value]] of Object.entries(expected)) {
      const out = renderCsv(join(FIXTURES, `${id}.csv`));
      expect(out.fits[key]).toBeDefined();
      expect(Math.abs(out.fits[key] - value)).toBeLessThan(0.005);
      expect(out.svg).toContain(`slope ${value.toFixed(2)}`);
    }
  });

  it("refuses unknown scenarios", () => {
    expect(() => renderCsv("/tmp/not-a-scenario.csv")).toThrow(/no recipe/);
  });

  it("empty CSV: error raised, no file written", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const csv = join(dir, "fig1b.csv");
    writeFileSync(csv, "");
    expect(() => renderToFile(csv, join(dir, "out"))).toThrow(/empty CSV/);
    expect(existsSync(join(dir, "out", "fig1b.svg"))).toBe(false);
  });
});
