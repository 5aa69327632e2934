/** Parsing/validation of the convergence-study CSV contract. */

export interface StudyRow {
  scheme: string;
  bc: string;
  c: number;
  N: number;
  s: number;
  error: number;
  /** pairwise order vs the previous row of the same c group; null on the
   *  first row of each group */
  observedOrder: number | null;
}

export const CSV_HEADER = "scheme,bc,c,N,s,error,observed_order";

export function parseConvergenceCsv(text: string): StudyRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV");
  }
  if (lines[0] !== CSV_HEADER) {
    throw new Error(
      `unexpected CSV header: got "${lines[0]}", want "${CSV_HEADER}"`,
    );
  }
  if (lines.length === 1) {
    throw new Error("CSV has a header but no data rows");
  }
  const rows: StudyRow[] = [];
  for (const line of lines.slice(1)) {
    const parts = line.split(",");
    if (parts.length !== 7) {
      throw new Error(`malformed CSV row: "${line}"`);
    }
    const [scheme, bc, c, N, s, error, order] = parts;
    const row: StudyRow = {
      scheme,
      bc,
      c: Number(c),
      N: Number(N),
      s: Number(s),
      error: Number(error),
      observedOrder: order === "" ? null : Number(order),
    };
    if (
      !Number.isFinite(row.c) ||
      !Number.isInteger(row.N) ||
      !(row.s > 0) ||
      !(row.error > 0) ||
      (row.observedOrder !== null && !Number.isFinite(row.observedOrder))
    ) {
      throw new Error(`non-numeric or non-positive fields in row: "${line}"`);
    }
    rows.push(row);
  }
  return rows;
}

/** Rows grouped by c, preserving first-appearance order of the groups. */
export function groupByC(rows: StudyRow[]): Map<number, StudyRow[]> {
  const groups = new Map<number, StudyRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.c);
    if (bucket === undefined) {
      groups.set(row.c, [row]);
    } else {
      bucket.push(row);
    }
  }
  for (const bucket of groups.values()) {
    bucket.sort((a, b) => a.N - b.N);
  }
  return groups;
}
