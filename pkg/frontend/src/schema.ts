import fs from "node:fs";
import path from "node:path";

export const SCHEMA_VERSION = 1;

export interface Probe {
  kind: "fock" | "coherent";
  n?: number;
  nbar?: number;
}

export interface GridMeta {
  n_atoms: number;
  period: number;
  k_range: [number, number];
  l_range: [number, number];
  eps_grid: number;
  energy_capture: [number, number];
}

export interface SignalMeta {
  omega0: number;
  sigma: number;
  tau0: number;
  tau1: number;
}

interface SidecarCommon {
  schema_version: number;
  columns: string[];
  probe: Probe;
  grid: GridMeta;
  signal: SignalMeta;
}

export interface CurveSidecar extends SidecarCommon {
  kind: "curve";
  ordering: string;
  s_sys_bits: number;
  seed: number;
  n_seeds: number | null;
}

export interface MapSidecar extends SidecarCommon {
  kind: "map";
}

export interface Manifest {
  schema_version: number;
  kind: "sweep";
  files: string[];
  probes: Probe[];
  orderings: string[];
}

function readJson(p: string): Record<string, unknown> {
  const doc: unknown = JSON.parse(fs.readFileSync(p, "utf-8"));
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error(`${p}: expected a JSON object`);
  }
  return doc as Record<string, unknown>;
}

function checkSchemaVersion(doc: Record<string, unknown>, p: string): void {
  if (doc.schema_version !== SCHEMA_VERSION) {
    throw new Error(
      `${p}: schema_version ${String(doc.schema_version)} is not the supported ${SCHEMA_VERSION}`,
    );
  }
}

function checkKind(doc: Record<string, unknown>, want: string, p: string): void {
  if (doc.kind !== want) {
    throw new Error(`${p}: kind ${String(doc.kind)}, expected ${want}`);
  }
}

export function loadManifest(dir: string): Manifest {
  const p = path.join(dir, "manifest.json");
  const doc = readJson(p);
  checkSchemaVersion(doc, p);
  checkKind(doc, "sweep", p);
  if (!Array.isArray(doc.files) || doc.files.some((f) => typeof f !== "string")) {
    throw new Error(`${p}: files must be a list of names`);
  }
  return doc as unknown as Manifest;
}

/** Sidecar path for a CSV: same stem, .json suffix. */
export function sidecarPath(csvPath: string): string {
  return csvPath.replace(/\.csv$/, ".json");
}

export function loadCurveSidecar(csvPath: string): CurveSidecar {
  const p = sidecarPath(csvPath);
  const doc = readJson(p);
  checkSchemaVersion(doc, p);
  checkKind(doc, "curve", p);
  return doc as unknown as CurveSidecar;
}

export function loadMapSidecar(csvPath: string): MapSidecar {
  const p = sidecarPath(csvPath);
  const doc = readJson(p);
  checkSchemaVersion(doc, p);
  checkKind(doc, "map", p);
  return doc as unknown as MapSidecar;
}

/** Probe strength: photon number for Fock, mean photon number for coherent. */
export function probeStrength(probe: Probe): number {
  const v = probe.kind === "fock" ? probe.n : probe.nbar;
  if (typeof v !== "number") {
    throw new Error(`probe ${JSON.stringify(probe)}: missing strength field`);
  }
  return v;
}

export function probeLabel(probe: Probe): string {
  return probe.kind === "fock"
    ? `Fock n=${probe.n}`
    : `coherent nbar=${probe.nbar}`;
}
