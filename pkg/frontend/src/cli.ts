#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { render, type FigureKind } from "./render.js";

const argv = yargs(hideBin(process.argv))
  .scriptName("figures")
  .command("$0 <kind>", "render a figure from a probability grid CSV", (y) =>
    y
      .positional("kind", {
        choices: ["surface", "contour", "quarter"] as const,
        describe: "probability surface, its isolines, or the nonnegative-bias quarter",
        demandOption: true,
      })
      .option("in", { type: "string", demandOption: true, describe: "grid CSV path" })
      .option("out", { type: "string", demandOption: true, describe: "output PNG path" })
      .option("levels", { type: "string", describe: "comma-separated isoline values" })
      .option("colormap", { type: "string", default: "viridis" })
      .option("width", { type: "number", default: 1000 })
      .option("height", { type: "number", default: 800 })
      .option("dpi", { type: "number", default: 200 }),
  )
  .strict()
  .help()
  .parseSync();

try {
  const result = render({
    input: argv.in as string,
    kind: argv.kind as FigureKind,
    output: argv.out as string,
    colormapName: argv.colormap as string,
    levels: argv.levels ? (argv.levels as string).split(",").map(Number) : undefined,
    width: argv.width as number,
    height: argv.height as number,
    dpi: argv.dpi as number,
  });
  console.log(
    `wrote ${argv.out} (${argv.width}x${argv.height}); grid max ${result.max.value.toFixed(4)} at (${result.max.a0}, ${result.max.b0})`,
  );
} catch (err) {
  console.error(`error: ${err instanceof Error ? err.message : err}`);
  process.exit(1);
}
