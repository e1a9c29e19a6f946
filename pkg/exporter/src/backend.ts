/**
 * Token-level embedding backends. The transformer backend wraps a
 * feature-extraction checkpoint (BERT-family encoders like BioLORD, SapBERT
 * or CODER) and exposes raw per-token representations plus attention and
 * special-token masks, leaving pooling to `meanPool`.
 */

import type { TokenBatch } from "./pooling.js";

export interface TokenEmbedder {
  readonly modelId: string;
  embedTokens(texts: string[]): Promise<TokenBatch>;
}

export class ModelLoadFailure extends Error {}

// resolved at runtime so the rest of the package (stub-backed tests, store
// tooling) works even where the inference runtime cannot be installed
const TRANSFORMERS_MODULE = "@huggingface/transformers";

export async function loadTransformersBackend(modelId: string): Promise<TokenEmbedder> {
  let lib: any;
  try {
    lib = await import(TRANSFORMERS_MODULE);
  } catch (err) {
    throw new ModelLoadFailure(`cannot load ${TRANSFORMERS_MODULE}: ${err}`);
  }
  let tokenizer: any;
  let model: any;
  try {
    tokenizer = await lib.AutoTokenizer.from_pretrained(modelId);
    model = await lib.AutoModel.from_pretrained(modelId);
  } catch (err) {
    throw new ModelLoadFailure(`cannot load checkpoint ${modelId}: ${err}`);
  }

  const specialIds = new Set<number>(
    (tokenizer.added_tokens ?? [])
      .filter((t: any) => t.special)
      .map((t: any) => Number(t.id)),
  );

  return {
    modelId,
    async embedTokens(texts: string[]): Promise<TokenBatch> {
      const inputs = await tokenizer(texts, { padding: true, truncation: true });
      const output = await model(inputs);
      const hidden = output.last_hidden_state;
      const [batch, seq, dim] = hidden.dims as number[];
      const data = hidden.data as Float32Array;
      const ids = toNumberMatrix(inputs.input_ids.tolist());
      const attentionMask = toNumberMatrix(inputs.attention_mask.tolist());

      const tokens: number[][][] = [];
      const specialMask: number[][] = [];
      for (let b = 0; b < batch; b++) {
        const rows: number[][] = [];
        const special: number[] = [];
        for (let s = 0; s < seq; s++) {
          const offset = (b * seq + s) * dim;
          rows.push(Array.from(data.subarray(offset, offset + dim)));
          special.push(specialIds.has(ids[b][s]) ? 1 : 0);
        }
        tokens.push(rows);
        specialMask.push(special);
      }
      return { dim, tokens, attentionMask, specialMask };
    },
  };
}

function toNumberMatrix(values: unknown[][]): number[][] {
  return values.map((row) => row.map((x) => Number(x)));
}
