/**
 * The scenario CSV contract. One file per scenario, fixed header; numeric
 * fields are plain decimal literals, never quoted, so a strict split is a
 * full parser. Fails loudly on any drift from the schema.
 */

import { readFileSync } from "fs";

export const CSV_COLUMNS = [
  "scenario", "seed", "N", "M", "g", "Jprime", "Delta", "kappa",
  "gamma_P", "gamma_out", "gamma_sp", "gamma_deph", "deltaJ",
  "observable_name", "t_or_none", "value",
] as const;

export type Column = (typeof CSV_COLUMNS)[number];

export interface Row {
  scenario: string;
  seed: string;
  N: number;
  M: number;
  g: number;
  Jprime: number;
  Delta: number;
  kappa: number;
  gamma_P: number;
  gamma_out: number;
  gamma_sp: number;
  gamma_deph: number;
  deltaJ: number;
  observable_name: string;
  t: number | null; // t_or_none
  value: number;
}

export class SchemaError extends Error {}

const NUMERIC: Column[] = [
  "N", "M", "g", "Jprime", "Delta", "kappa", "gamma_P", "gamma_out",
  "gamma_sp", "gamma_deph", "deltaJ", "value",
];

export function parseCsv(text: string, source = "<csv>"): Row[] {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty CSV`);
  }
  const header = lines[0].split(",");
  for (const col of CSV_COLUMNS) {
    if (!header.includes(col)) {
      throw new SchemaError(`${source}: missing column '${col}'`);
    }
  }
  if (header.length !== CSV_COLUMNS.length) {
    const extra = header.filter((h) => !(CSV_COLUMNS as readonly string[]).includes(h));
    throw new SchemaError(`${source}: unexpected columns ${extra.join(", ")}`);
  }
  const idx = new Map(header.map((h, i) => [h, i]));
  const rows: Row[] = [];
  for (let ln = 1; ln < lines.length; ln++) {
    const parts = lines[ln].split(",");
    if (parts.length !== header.length) {
      throw new SchemaError(`${source}:${ln + 1}: expected ${header.length} fields, got ${parts.length}`);
    }
    const get = (c: Column) => parts[idx.get(c)!];
    const num = (c: Column) => {
      const v = Number(get(c));
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${source}:${ln + 1}: non-numeric '${get(c)}' in column '${c}'`);
      }
      return v;
    };
    for (const c of NUMERIC) num(c);
    const traw = get("t_or_none");
    rows.push({
      scenario: get("scenario"),
      seed: get("seed"),
      N: num("N"),
      M: num("M"),
      g: num("g"),
      Jprime: num("Jprime"),
      Delta: num("Delta"),
      kappa: num("kappa"),
      gamma_P: num("gamma_P"),
      gamma_out: num("gamma_out"),
      gamma_sp: num("gamma_sp"),
      gamma_deph: num("gamma_deph"),
      deltaJ: num("deltaJ"),
      observable_name: get("observable_name"),
      t: traw === "" ? null : Number(traw),
      value: num("value"),
    });
  }
  if (rows.length === 0) {
    throw new SchemaError(`${source}: no data rows`);
  }
  return rows;
}

export function readScenarioCsv(path: string): Row[] {
  return parseCsv(readFileSync(path, "utf8"), path);
}

/** Rows to plot: the mean rows when an ensemble was aggregated, otherwise
 * the raw per-seed rows. */
export function plottable(rows: Row[]): Row[] {
  const means = rows.filter((r) => r.seed === "mean");
  if (means.length > 0) return means;
  return rows.filter((r) => r.seed !== "stderr");
}
