import fs from "node:fs";
import path from "node:path";

import { floats, optionalFloats, readCsv } from "./csv.js";
import {
  CurveSidecar,
  Manifest,
  MapSidecar,
  loadCurveSidecar,
  loadManifest,
  loadMapSidecar,
} from "./schema.js";

export interface CurveSeries {
  file: string;
  sidecar: CurveSidecar;
  f: number[];
  miBits: number[];
  miOverSs: number[];
  miStd: (number | null)[];
  chiBits: (number | null)[];
}

export interface MapSeries {
  file: string;
  sidecar: MapSidecar;
  k: number[];
  l: number[];
  tCenter: number[];
  omegaCenter: number[];
  miBits: number[];
}

export interface SweepCell {
  dir: string;
  manifest: Manifest;
  sigmaT: number;
  curves: CurveSeries[];
  maps: MapSeries[];
}

function loadCurve(csvPath: string): CurveSeries {
  const sidecar = loadCurveSidecar(csvPath);
  const table = readCsv(csvPath);
  if (table.columns.join(",") !== sidecar.columns.join(",")) {
    throw new Error(`${csvPath}: header differs from sidecar columns`);
  }
  return {
    file: csvPath,
    sidecar,
    f: floats(table, "f"),
    miBits: floats(table, "mi_bits"),
    miOverSs: floats(table, "mi_over_ss"),
    miStd: optionalFloats(table, "mi_std"),
    chiBits: optionalFloats(table, "chi_bits"),
  };
}

function loadMap(csvPath: string): MapSeries {
  const sidecar = loadMapSidecar(csvPath);
  const table = readCsv(csvPath);
  if (table.columns.join(",") !== sidecar.columns.join(",")) {
    throw new Error(`${csvPath}: header differs from sidecar columns`);
  }
  return {
    file: csvPath,
    sidecar,
    k: floats(table, "k"),
    l: floats(table, "l"),
    tCenter: floats(table, "t_center"),
    omegaCenter: floats(table, "omega_center"),
    miBits: floats(table, "mi_bits"),
  };
}

function loadCell(dir: string): SweepCell {
  const manifest = loadManifest(dir);
  const curves: CurveSeries[] = [];
  const maps: MapSeries[] = [];
  const problems: string[] = [];
  for (const name of manifest.files) {
    const p = path.join(dir, name);
    try {
      if (!fs.existsSync(p)) {
        throw new Error(`${p}: listed in the manifest but missing`);
      }
      if (name.startsWith("curve_")) curves.push(loadCurve(p));
      else if (name.startsWith("map_")) maps.push(loadMap(p));
      else throw new Error(`${p}: unrecognized output name`);
    } catch (err) {
      problems.push(String(err instanceof Error ? err.message : err));
    }
  }
  if (problems.length > 0) {
    throw new Error(`cell ${dir}:\n  ${problems.join("\n  ")}`);
  }
  const meta = curves[0]?.sidecar ?? maps[0]?.sidecar;
  if (!meta) throw new Error(`cell ${dir}: manifest lists no outputs`);
  return { dir, manifest, sigmaT: meta.signal.sigma * meta.grid.period, curves, maps };
}

/**
 * Find sweep cells under a directory: the directory itself if it holds a
 * manifest.json, otherwise each immediate subdirectory that does.  Cells are
 * returned sorted by sigma*T so figure rows come out in pulse-length order.
 */
export function discoverCells(inDir: string): SweepCell[] {
  if (!fs.existsSync(inDir)) {
    throw new Error(`${inDir}: no such directory`);
  }
  const candidates = fs.existsSync(path.join(inDir, "manifest.json"))
    ? [inDir]
    : fs
        .readdirSync(inDir, { withFileTypes: true })
        .filter((e) => e.isDirectory())
        .map((e) => path.join(inDir, e.name))
        .filter((d) => fs.existsSync(path.join(d, "manifest.json")))
        .sort();
  if (candidates.length === 0) {
    throw new Error(`${inDir}: no sweep manifest.json found (ran qdarwin sweep?)`);
  }
  const cells = candidates.map(loadCell);
  cells.sort((a, b) => a.sigmaT - b.sigmaT);
  return cells;
}
