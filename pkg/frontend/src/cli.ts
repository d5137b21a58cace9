import fs from "node:fs";
import path from "node:path";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { discoverCells } from "./discover.js";
import { renderCurveGrid } from "./curves.js";
import { renderTfMap } from "./tfmap.js";

const USAGE = `usage: cli.js <curves|map> --in <sweep dir> --out <file.svg>

  curves   redundancy-curve panel grid (rows: sigma T, cols: probe strength)
  map      per-atom mutual information over the time-frequency plane
`;

export function main(argv: string[]): number {
  let parsed;
  try {
    parsed = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        out: { type: "string" },
      },
    });
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    console.error(USAGE);
    return 2;
  }
  const command = parsed.positionals[0];
  const inDir = parsed.values.in;
  const outPath = parsed.values.out;
  if (parsed.positionals.length !== 1 || !inDir || !outPath || (command !== "curves" && command !== "map")) {
    console.error(USAGE);
    return 2;
  }

  try {
    const cells = discoverCells(inDir);
    const svg = command === "curves" ? renderCurveGrid(cells) : renderTfMap(cells);
    fs.mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
    fs.writeFileSync(outPath, svg);
    console.log(`wrote ${outPath} (${cells.length} cell${cells.length === 1 ? "" : "s"})`);
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
