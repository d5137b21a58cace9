import fs from "node:fs";

export interface Table {
  columns: string[];
  rows: string[][];
}

/**
 * Read the emitter's CSV dialect: CRLF line endings, trailing newline, no
 * quoting (the emitter never writes a field that would need it, so a quote
 * character means the file is not ours).
 */
export function readCsv(path: string): Table {
  const raw = fs.readFileSync(path, "utf-8");
  if (raw.includes('"')) {
    throw new Error(`${path}: quoted CSV is not emitted by the sweep; refusing to guess`);
  }
  const lines = raw.split("\r\n");
  if (lines.length < 2 || lines[lines.length - 1] !== "") {
    throw new Error(`${path}: expected CRLF lines with a trailing newline`);
  }
  lines.pop();
  const columns = (lines[0] as string).split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  rows.forEach((row, i) => {
    if (row.length !== columns.length) {
      throw new Error(
        `${path}: row ${i + 2} has ${row.length} fields, header has ${columns.length}`,
      );
    }
  });
  return { columns, rows };
}

export function column(table: Table, name: string): string[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column ${name} (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((r) => r[idx] as string);
}

export function floats(table: Table, name: string): number[] {
  return column(table, name).map((v, i) => {
    const x = Number(v);
    if (v === "" || !Number.isFinite(x)) {
      throw new Error(`column ${name}, row ${i + 2}: not a finite number: ${JSON.stringify(v)}`);
    }
    return x;
  });
}

/** Like floats, but empty cells (unpopulated optional columns) become null. */
export function optionalFloats(table: Table, name: string): (number | null)[] {
  return column(table, name).map((v, i) => {
    if (v === "") return null;
    const x = Number(v);
    if (!Number.isFinite(x)) {
      throw new Error(`column ${name}, row ${i + 2}: not a finite number: ${JSON.stringify(v)}`);
    }
    return x;
  });
}
