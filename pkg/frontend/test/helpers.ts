import fs from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

export const FIXTURES = fileURLToPath(new URL("./fixtures/sweep", import.meta.url));

export function cellDir(name: string): string {
  return path.join(FIXTURES, name);
}

/** Copy the fixture tree into a fresh temp dir the test may mutate. */
export function scratchCopy(): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "qdplots-"));
  fs.cpSync(FIXTURES, dir, { recursive: true });
  return dir;
}

export function emptyDir(): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), "qdplots-empty-"));
}

export function rewriteJson(p: string, edit: (doc: any) => void): void {
  const doc = JSON.parse(fs.readFileSync(p, "utf-8"));
  edit(doc);
  fs.writeFileSync(p, JSON.stringify(doc));
}
