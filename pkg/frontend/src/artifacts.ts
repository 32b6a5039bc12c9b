import fs from "node:fs";
import Papa from "papaparse";

/** Column orders written by the scrapfwm CLI, keyed by artifact type. */
export const ARTIFACT_HEADERS = {
  trajectory: ["T", "r_n", "re_r_gn", "im_r_gn", "abs_r_gn", "omega_st", "r1_abs"],
  metrics: [
    "Z",
    "eps_pump",
    "eps_probe",
    "eps_generated",
    "w_pump",
    "w_probe",
    "w_generated",
    "pump_energy_ratio",
  ],
  slice: ["T", "g1_abs2", "g2_abs2", "gmix_abs2", "r_n", "r_gn_abs"],
} as const;

export type ArtifactType = keyof typeof ARTIFACT_HEADERS;

export class ArtifactError extends Error {}

export interface Artifact {
  file: string;
  type: ArtifactType;
  columns: Map<string, number[]>;
  rows: number;
}

export function readArtifact(file: string, type: ArtifactType): Artifact {
  if (!fs.existsSync(file)) {
    throw new ArtifactError(`input file not found: ${file}`);
  }
  const text = fs.readFileSync(file, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0]!;
    throw new ArtifactError(`${file}: ${e.message} (row ${e.row})`);
  }
  const grid = parsed.data;
  if (grid.length === 0) {
    throw new ArtifactError(`${file}: empty file`);
  }
  const header = grid[0]!;
  const expected = ARTIFACT_HEADERS[type];
  for (const name of expected) {
    if (!header.includes(name)) {
      throw new ArtifactError(
        `${file} is missing column "${name}" expected of a ${type} artifact ` +
          `(found: ${header.join(", ")})`,
      );
    }
  }
  if (header.length !== expected.length) {
    const extra = header.filter((h) => !(expected as readonly string[]).includes(h));
    throw new ArtifactError(
      `${file} has unexpected columns for a ${type} artifact: ${extra.join(", ")}`,
    );
  }

  const columns = new Map<string, number[]>();
  for (const name of header) columns.set(name, []);
  for (let i = 1; i < grid.length; i++) {
    const row = grid[i]!;
    if (row.length !== header.length) {
      throw new ArtifactError(
        `${file}: row ${i + 1} has ${row.length} cells, header has ${header.length}`,
      );
    }
    for (let j = 0; j < header.length; j++) {
      const value = Number(row[j]);
      if (Number.isNaN(value) && row[j] !== "nan") {
        throw new ArtifactError(
          `${file}: non-numeric cell "${row[j]}" in column "${header[j]}" at row ${i + 1}`,
        );
      }
      columns.get(header[j]!)!.push(value);
    }
  }
  return { file, type, columns, rows: grid.length - 1 };
}

export function column(artifact: Artifact, name: string): number[] {
  const values = artifact.columns.get(name);
  if (values === undefined) {
    throw new ArtifactError(`${artifact.file} is missing column "${name}"`);
  }
  return values;
}
