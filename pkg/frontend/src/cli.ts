#!/usr/bin/env node
import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderSvg } from "./chart.js";
import { SeriesError, loadSeries, prepareSeries } from "./series.js";

export async function main(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .scriptName("scinv-render")
    .command("render <csv> <out>", "render an error-vs-timestep figure", (y) =>
      y
        .positional("csv", { type: "string", demandOption: true, describe: "simulation CSV (t,err,chain_failed)" })
        .positional("out", { type: "string", demandOption: true, describe: "output image path (SVG content)" })
        .option("clip", { type: "number", default: 1e14, describe: "draw values above this at the clip line" })
        .option("linear", { type: "boolean", default: false, describe: "linear vertical axis instead of log" })
        .option("title", { type: "string", describe: "figure title" })
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new SeriesError(msg);
    });

  try {
    const args = await parser.parse();
    const rows = loadSeries(args.csv as string);
    const points = prepareSeries(rows, args.clip as number);
    const svg = renderSvg(points, {
      clip: args.clip as number,
      linear: args.linear as boolean,
      title: args.title as string | undefined,
    });
    writeFileSync(args.out as string, svg);
    return 0;
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
}

const invokedDirectly = process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
