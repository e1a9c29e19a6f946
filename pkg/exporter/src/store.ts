/**
 * Embedding store writer, matching the JSONL format the scoring toolkit
 * loads: a header object on the first line, one {text, vector} record per
 * line after it. Vectors are float32; JS numbers serialized from their exact
 * float64 widening round-trip bit-for-bit.
 */

import { writeFile } from "node:fs/promises";

export const STORE_FORMAT = "idiolens-embeddings";
export const STORE_VERSION = 1;

export interface StoreRecord {
  text: string;
  vector: number[];
}

export function toFloat32(vector: number[]): number[] {
  return vector.map((x) => Math.fround(x));
}

export function storeLines(dim: number, modelId: string, records: StoreRecord[]): string[] {
  const lines = [
    JSON.stringify({ format: STORE_FORMAT, version: STORE_VERSION, dim, model_id: modelId }),
  ];
  for (const { text, vector } of records) {
    if (vector.length !== dim) {
      throw new Error(`vector for ${JSON.stringify(text)} has length ${vector.length}, dim ${dim}`);
    }
    lines.push(JSON.stringify({ text, vector: toFloat32(vector) }));
  }
  return lines;
}

export async function writeStore(
  path: string,
  dim: number,
  modelId: string,
  records: StoreRecord[],
): Promise<void> {
  await writeFile(path, storeLines(dim, modelId, records).join("\n") + "\n", "utf-8");
}
