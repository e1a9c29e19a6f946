/**
 * Batch export: run every unique input string (terms and their constituent
 * words) through the backend, mean-pool, and write the store file.
 */

import type { TokenEmbedder } from "./backend.js";
import { meanPool, type PoolOptions } from "./pooling.js";
import { writeStore, type StoreRecord } from "./store.js";
import { embeddingTexts, readTerms } from "./terms.js";

export interface ExportJob {
  modelId: string;
  termsPath: string;
  outPath: string;
  batchSize?: number;
  includeSpecial?: boolean;
}

export interface ExportResult {
  texts: number;
  dim: number;
}

export async function embedTexts(
  texts: string[],
  backend: TokenEmbedder,
  batchSize: number,
  pool: PoolOptions,
): Promise<{ dim: number; records: StoreRecord[] }> {
  const records: StoreRecord[] = [];
  let dim = 0;
  for (let i = 0; i < texts.length; i += batchSize) {
    const batch = texts.slice(i, i + batchSize);
    const tokens = await backend.embedTokens(batch);
    dim = tokens.dim;
    const pooled = meanPool(tokens, pool);
    batch.forEach((text, j) => records.push({ text, vector: pooled[j] }));
  }
  return { dim, records };
}

export async function exportEmbeddings(
  job: ExportJob,
  backend: TokenEmbedder,
): Promise<ExportResult> {
  const records = await readTerms(job.termsPath);
  const texts = embeddingTexts(records);
  const { dim, records: embedded } = await embedTexts(
    texts,
    backend,
    job.batchSize ?? 16,
    { includeSpecial: job.includeSpecial ?? false },
  );
  await writeStore(job.outPath, dim, job.modelId, embedded);
  return { texts: texts.length, dim };
}
