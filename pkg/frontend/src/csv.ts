/** Reader for the flatwave CSV format: `#` metadata lines, a column header,
 *  numeric rows. */

export interface CsvTable {
  /** key = value pairs from the `# key = value` header lines */
  meta: Map<string, string>;
  columns: string[];
  /** column name -> numeric values */
  data: Map<string, number[]>;
  rowCount: number;
}

export class CsvError extends Error {}

export function parseCsv(text: string): CsvTable {
  const meta = new Map<string, string>();
  let columns: string[] | null = null;
  const rows: number[][] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0) continue;
    if (line.startsWith("#")) {
      const body = line.slice(1).trim();
      const eq = body.indexOf("=");
      if (eq > 0) {
        meta.set(body.slice(0, eq).trim(), body.slice(eq + 1).trim());
      }
      continue;
    }
    if (columns === null) {
      columns = line.split(",").map((c) => c.trim());
      continue;
    }
    const parts = line.split(",");
    if (parts.length !== columns.length) {
      throw new CsvError(
        `line ${i + 1}: expected ${columns.length} fields, got ${parts.length}`,
      );
    }
    rows.push(parts.map((p) => Number(p)));
  }
  if (columns === null) {
    throw new CsvError("empty input: no column header found");
  }
  if (rows.length === 0) {
    throw new CsvError("empty input: no data rows");
  }
  const data = new Map<string, number[]>();
  columns.forEach((name, j) => {
    data.set(
      name,
      rows.map((r) => r[j]),
    );
  });
  return { meta, columns, data, rowCount: rows.length };
}

export function requireColumns(table: CsvTable, names: string[]): void {
  for (const name of names) {
    if (!table.data.has(name)) {
      throw new CsvError(
        `missing column '${name}' (have: ${table.columns.join(", ")})`,
      );
    }
  }
}

/** Rows of a string-valued column (the first column may be categorical). */
export function categoricalColumn(text: string, index: number): string[] {
  const out: string[] = [];
  let seenHeader = false;
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (line.length === 0 || line.startsWith("#")) continue;
    if (!seenHeader) {
      seenHeader = true;
      continue;
    }
    out.push(line.split(",")[index].trim());
  }
  return out;
}
