/**
 * Term-list reading with the same normalization the scoring toolkit applies:
 * UTF-8, one name per line, whitespace runs collapsed, blank lines skipped,
 * everything case-sensitive.
 */

import { readFile } from "node:fs/promises";

export interface TermRecord {
  term: string;
  constituents: string[];
}

export function parseTerms(content: string): TermRecord[] {
  const records: TermRecord[] = [];
  for (const line of content.split(/\r?\n/)) {
    const words = line.split(/\s+/).filter((w) => w.length > 0);
    if (words.length === 0) continue;
    records.push({ term: words.join(" "), constituents: words });
  }
  return records;
}

export async function readTerms(path: string): Promise<TermRecord[]> {
  return parseTerms(await readFile(path, "utf-8"));
}

/** Every string needing a vector: each full term plus each constituent word,
 * deduplicated in first-seen order. */
export function embeddingTexts(records: TermRecord[]): string[] {
  const seen = new Set<string>();
  const texts: string[] = [];
  for (const record of records) {
    for (const text of [record.term, ...record.constituents]) {
      if (!seen.has(text)) {
        seen.add(text);
        texts.push(text);
      }
    }
  }
  return texts;
}
