import fs from "node:fs";
import path from "node:path";
import { describe, expect, it } from "vitest";

import { discoverCells } from "../src/discover.js";
import { FIXTURES, cellDir, emptyDir, rewriteJson, scratchCopy } from "./helpers.js";

describe("discoverCells", () => {
  it("finds both cells and orders them by sigma T", () => {
    const cells = discoverCells(FIXTURES);
    expect(cells.map((c) => c.sigmaT)).toEqual([0.6, 1.05]);
    for (const cell of cells) {
      expect(cell.curves).toHaveLength(6);
      expect(cell.maps).toHaveLength(2);
    }
  });

  it("treats a directory holding manifest.json as a single cell", () => {
    const cells = discoverCells(cellDir("sT1p05"));
    expect(cells).toHaveLength(1);
    expect(cells[0]!.curves.map((c) => c.sidecar.ordering).sort()).toEqual([
      "naive",
      "naive",
      "random",
      "random",
      "smart",
      "smart",
    ]);
  });

  it("parses curve content consistently with its sidecar", () => {
    const cell = discoverCells(cellDir("sT0p60"))[0]!;
    const smart = cell.curves.find(
      (c) => c.sidecar.ordering === "smart" && c.sidecar.probe.kind === "fock",
    )!;
    expect(smart.f).toHaveLength(smart.sidecar.grid.n_atoms);
    const last = smart.miBits[smart.miBits.length - 1]!;
    expect(last).toBeCloseTo(2 * smart.sidecar.s_sys_bits, 9);
    expect(smart.chiBits.filter((v) => v !== null).length).toBeGreaterThan(0);
  });

  it("errors on a directory with no manifests", () => {
    expect(() => discoverCells(emptyDir())).toThrow(/no sweep manifest\.json/);
  });

  it("names the file when a manifest entry is missing", () => {
    const dir = scratchCopy();
    fs.rmSync(path.join(dir, "sT1p05", "curve_fock_n2_naive.csv"));
    expect(() => discoverCells(dir)).toThrow(/curve_fock_n2_naive\.csv.*missing/s);
  });

  it("rejects a cell whose sidecar has a different schema version", () => {
    const dir = scratchCopy();
    rewriteJson(path.join(dir, "sT0p60", "curve_coherent_nbar2_smart.json"), (doc) => {
      doc.schema_version = 2;
    });
    expect(() => discoverCells(dir)).toThrow(/schema_version 2 is not the supported 1/);
  });
});
