/**
 * Parsers for the run artifacts. The producing side writes plain
 * comma-separated files with fixed headers and no quoting.
 */

export class SchemaError extends Error {
  constructor(public readonly file: string, message: string) {
    super(`${file}: ${message}`);
  }
}

export interface LossRow {
  epoch: number;
  meanLoss: number;
  jobs: number;
  seconds: number;
}

export interface FidelityRow {
  imageId: number;
  fidelity: number;
}

function splitRows(text: string): string[][] {
  return text
    .split(/\r?\n/)
    .filter((line) => line.trim().length > 0)
    .map((line) => line.split(","));
}

function requireHeader(file: string, got: string[], want: string[]): void {
  if (got.length !== want.length || !want.every((h, i) => got[i].trim() === h)) {
    throw new SchemaError(file, `expected header ${want.join(",")}, got ${got.join(",")}`);
  }
}

function num(file: string, field: string, raw: string): number {
  const value = Number(raw);
  if (!Number.isFinite(value)) {
    throw new SchemaError(file, `field ${field}: not a number: ${raw}`);
  }
  return value;
}

export function parseLossCsv(file: string, text: string): LossRow[] {
  const rows = splitRows(text);
  if (rows.length === 0) throw new SchemaError(file, "empty file");
  requireHeader(file, rows[0], ["epoch", "mean_loss", "jobs", "seconds"]);
  return rows.slice(1).map((r) => ({
    epoch: num(file, "epoch", r[0]),
    meanLoss: num(file, "mean_loss", r[1]),
    jobs: num(file, "jobs", r[2]),
    seconds: num(file, "seconds", r[3]),
  }));
}

export function parseFidelityCsv(file: string, text: string): FidelityRow[] {
  const rows = splitRows(text);
  if (rows.length === 0) throw new SchemaError(file, "empty file");
  requireHeader(file, rows[0], ["image_id", "fidelity"]);
  const parsed = rows.slice(1).map((r) => ({
    imageId: num(file, "image_id", r[0]),
    fidelity: num(file, "fidelity", r[1]),
  }));
  if (parsed.length === 0) throw new SchemaError(file, "no data rows");
  return parsed;
}

/** Complex matrix as nested [re, im] pairs, row-major. */
export type ComplexMatrix = [number, number][][];

export interface DensityMatrixDoc {
  imageId: number;
  width: number;
  height: number;
  pixels: number[];
  matrices: { label: string; entries: ComplexMatrix }[];
}

function checkMatrix(file: string, label: string, m: unknown): ComplexMatrix {
  if (!Array.isArray(m) || m.length === 0) {
    throw new SchemaError(file, `matrix ${label}: expected non-empty array`);
  }
  const dim = m.length;
  for (const row of m) {
    if (!Array.isArray(row) || row.length !== dim) {
      throw new SchemaError(file, `matrix ${label}: not square`);
    }
    for (const cell of row) {
      if (!Array.isArray(cell) || cell.length !== 2 || !cell.every((x) => Number.isFinite(x))) {
        throw new SchemaError(file, `matrix ${label}: cells must be [re, im] pairs`);
      }
    }
  }
  return m as ComplexMatrix;
}

export function parseDensityMatrixJson(file: string, text: string): DensityMatrixDoc {
  let doc: Record<string, unknown>;
  try {
    doc = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(file, `invalid JSON: ${(err as Error).message}`);
  }
  const pixels = doc.pixels;
  const width = doc.width;
  const height = doc.height;
  if (!Array.isArray(pixels) || typeof width !== "number" || typeof height !== "number") {
    throw new SchemaError(file, "missing pixels/width/height");
  }
  if (pixels.length !== width * height) {
    throw new SchemaError(file, `pixels length ${pixels.length} != ${width}x${height}`);
  }
  const matrices: DensityMatrixDoc["matrices"] = [];
  for (const label of ["original", "latent", "decompressed"]) {
    if (label in doc) {
      matrices.push({ label, entries: checkMatrix(file, label, doc[label]) });
    }
  }
  if (matrices.length === 0) {
    throw new SchemaError(file, "no density matrices found");
  }
  return {
    imageId: typeof doc.image_id === "number" ? doc.image_id : -1,
    width,
    height,
    pixels: pixels as number[],
    matrices,
  };
}
