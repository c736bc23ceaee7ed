import { readFileSync } from "node:fs";

/** Raised when a CSV does not match the expected column schema. */
export class SchemaError extends Error {}

/** The four CSV schemas the simulation package writes. */
export const SCHEMAS = {
  sweep: [
    "alpha",
    "beta",
    "analytic_label",
    "empirical_label",
    "peak_blowup_norm",
    "quasi_blowup_time",
    "riccati_c",
  ],
  trajectory: [
    "t",
    "energy",
    "enstrophy",
    "gamma_norm",
    "blowup_norm",
    "theta",
    "min_coeff",
    "energy_residual",
  ],
  refine: [
    "n_modes",
    "peak_blowup_norm",
    "peak_enstrophy",
    "quasi_blowup_time",
    "terminated",
  ],
  radius: ["t", "radius_strong", "radius_weak"],
} as const;

export type SchemaName = keyof typeof SCHEMAS;

export interface Table {
  header: string[];
  rows: string[][];
}

/** Split CSV text into header and rows (no quoting in these schemas). */
export function parseCsv(text: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV: no header line");
  }
  const header = (lines[0] as string).split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

/** Read a CSV file and check it against one of the known schemas. */
export function readTable(path: string, schema: SchemaName): Table {
  const table = parseCsv(readFileSync(path, "utf8"));
  const expected = SCHEMAS[schema];
  if (
    table.header.length !== expected.length ||
    expected.some((name, i) => table.header[i] !== name)
  ) {
    throw new SchemaError(
      `${path}: header [${table.header.join(",")}] does not match the ` +
        `${schema} schema [${expected.join(",")}]`,
    );
  }
  for (const row of table.rows) {
    if (row.length !== expected.length) {
      throw new SchemaError(
        `${path}: row with ${row.length} cells, expected ${expected.length}`,
      );
    }
  }
  return table;
}

/** Column index lookup that fails loudly on typos. */
export function column(table: Table, name: string): number {
  const i = table.header.indexOf(name);
  if (i < 0) {
    throw new SchemaError(`missing column ${name}`);
  }
  return i;
}

/** Parse a numeric cell; empty cells mean "not available". */
export function num(cell: string | undefined): number | null {
  if (cell === undefined || cell === "") {
    return null;
  }
  const x = Number(cell);
  if (Number.isNaN(x)) {
    throw new SchemaError(`non-numeric cell: ${cell}`);
  }
  return x;
}
