import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { renderSvg } from "../src/chart.js";
import { main } from "../src/cli.js";
import { SeriesError, loadSeries, parseSeries, prepareSeries } from "../src/series.js";

const FIXED_CSV = join(__dirname, "fixtures", "fixed_rank.csv");
const THRESHOLD_CSV = join(__dirname, "fixtures", "threshold.csv");

function tmpFile(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "figures-")), name);
}

describe("parseSeries", () => {
  it("parses the documented schema", () => {
    const rows = parseSeries("t,err,chain_failed\n0.0,1.5e-12,false\n0.5,2e15,true\n");
    expect(rows).toEqual([
      { t: 0, err: 1.5e-12, chainFailed: false },
      { t: 0.5, err: 2e15, chainFailed: true },
    ]);
  });

  it("rejects a header-only CSV", () => {
    expect(() => parseSeries("t,err,chain_failed\n")).toThrow(SeriesError);
  });

  it("rejects a wrong header", () => {
    expect(() => parseSeries("a,b\n1,2\n")).toThrow(SeriesError);
  });

  it("rejects non-numeric values", () => {
    expect(() => parseSeries("t,err,chain_failed\nx,1,false\n")).toThrow(SeriesError);
  });

  it("loads both experiment fixtures", () => {
    expect(loadSeries(FIXED_CSV)).toHaveLength(300);
    expect(loadSeries(THRESHOLD_CSV)).toHaveLength(300);
  });
});

describe("prepareSeries", () => {
  it("clips values above the ceiling and flags them", () => {
    const rows = parseSeries("t,err,chain_failed\n0,1e-12,false\n1,1e14,false\n2,3e15,false\n");
    const points = prepareSeries(rows, 1e14);
    expect(points[0].clipped).toBe(false);
    expect(points[1].clipped).toBe(false);
    expect(points[1].value).toBe(1e14);
    expect(points[2].clipped).toBe(true);
    expect(points[2].value).toBe(1e14);
  });

  it("floors exact zeros for the log axis", () => {
    const points = prepareSeries(parseSeries("t,err,chain_failed\n0,0,false\n"), 1e14);
    expect(points[0].value).toBeGreaterThan(0);
  });
});

describe("renderSvg", () => {
  it("renders the fixed-rank fixture", () => {
    const points = prepareSeries(loadSeries(FIXED_CSV), 1e14);
    const svg = renderSvg(points, { clip: 1e14, title: "fixed rank" });
    expect(svg).toContain("<svg");
    expect(svg).toContain("error magnitude");
  });

  it("renders the threshold fixture with its spikes clipped", () => {
    const points = prepareSeries(loadSeries(THRESHOLD_CSV), 1e14);
    expect(points.some((p) => p.clipped)).toBe(true);
    const svg = renderSvg(points, { clip: 1e14 });
    expect(svg).toContain("<svg");
  });

  it("is deterministic", () => {
    // echarts numbers its in-process renderer instances into CSS class
    // names; normalize that counter, everything else must be identical
    const normalize = (svg: string) =>
      svg.replace(/zr\d+-/g, "zr-").replace(/zr-cls-\d+/g, "zr-cls");
    const points = prepareSeries(loadSeries(FIXED_CSV), 1e14);
    const a = renderSvg(points, { clip: 1e14 });
    const b = renderSvg(points, { clip: 1e14 });
    expect(normalize(a)).toBe(normalize(b));
  });

  it("supports a linear axis", () => {
    const points = prepareSeries(loadSeries(FIXED_CSV), 1e14);
    expect(renderSvg(points, { clip: 1e14, linear: true })).toContain("<svg");
  });
});

describe("cli", () => {
  it("renders both fixtures to files", async () => {
    for (const csv of [FIXED_CSV, THRESHOLD_CSV]) {
      const out = tmpFile("fig.svg");
      expect(await main(["render", csv, out, "--title", "run"])).toBe(0);
      expect(readFileSync(out, "utf8")).toContain("<svg");
    }
  });

  it("clips a synthetic 1e14-magnitude row at the clip line", async () => {
    const csv = tmpFile("spike.csv");
    writeFileSync(csv, "t,err,chain_failed\n0,1e-12,false\n1,99e14,false\n2,2e-12,false\n");
    const out = tmpFile("spike.svg");
    expect(await main(["render", csv, out])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("clipped at 1e+14");
  });

  it("fails with nonzero exit on a header-only CSV", async () => {
    const csv = tmpFile("empty.csv");
    writeFileSync(csv, "t,err,chain_failed\n");
    expect(await main(["render", csv, tmpFile("out.svg")])).toBe(1);
  });

  it("fails with nonzero exit on a missing file", async () => {
    expect(await main(["render", "/nonexistent.csv", tmpFile("out.svg")])).toBe(1);
  });
});
