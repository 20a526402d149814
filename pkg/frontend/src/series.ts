import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** One simulation timestep parsed from the CSV. */
export interface ErrorRow {
  t: number;
  err: number;
  chainFailed: boolean;
}

export class SeriesError extends Error {}

const EXPECTED_HEADER = ["t", "err", "chain_failed"];

/** Parse the simulation CSV (columns t,err,chain_failed). */
export function parseSeries(csvText: string): ErrorRow[] {
  const parsed = Papa.parse<Record<string, string>>(csvText.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SeriesError(`malformed CSV: ${parsed.errors[0].message}`);
  }
  const header = parsed.meta.fields ?? [];
  if (header.length !== EXPECTED_HEADER.length || header.some((h, i) => h !== EXPECTED_HEADER[i])) {
    throw new SeriesError(`unexpected CSV header [${header.join(",")}], expected [${EXPECTED_HEADER.join(",")}]`);
  }
  if (parsed.data.length === 0) {
    throw new SeriesError("CSV contains a header but no data rows");
  }
  return parsed.data.map((row, i) => {
    const t = Number(row.t);
    const err = Number(row.err);
    const flag = row.chain_failed;
    if (!Number.isFinite(t) || !Number.isFinite(err)) {
      throw new SeriesError(`row ${i + 1}: non-numeric t or err`);
    }
    if (flag !== "true" && flag !== "false") {
      throw new SeriesError(`row ${i + 1}: chain_failed must be true or false, got ${JSON.stringify(flag)}`);
    }
    return { t, err, chainFailed: flag === "true" };
  });
}

export function loadSeries(path: string): ErrorRow[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (e) {
    throw new SeriesError(`cannot read ${path}: ${(e as Error).message}`);
  }
  return parseSeries(text);
}

/** One plotted point: error magnitude clipped to the ceiling. */
export interface PlottedPoint {
  index: number;
  t: number;
  value: number;
  clipped: boolean;
  chainFailed: boolean;
}

/**
 * Clip error magnitudes at the ceiling and floor exact zeros so they
 * survive a logarithmic axis.
 */
export function prepareSeries(rows: ErrorRow[], clip: number): PlottedPoint[] {
  if (!(clip > 0)) {
    throw new SeriesError(`clip must be positive, got ${clip}`);
  }
  const floor = 1e-18;
  return rows.map((row, index) => ({
    index,
    t: row.t,
    value: Math.min(Math.max(row.err, floor), clip),
    clipped: row.err > clip,
    chainFailed: row.chainFailed,
  }));
}
