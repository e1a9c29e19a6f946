/**
 * Mean pooling over token representations.
 *
 * A text's vector is the average of its token vectors, skipping padding
 * always and special markers ([CLS]/[SEP]-style) by default. Models trained
 * to pool over special tokens can flip `includeSpecial`.
 */

export interface TokenBatch {
  /** hidden size of the checkpoint */
  dim: number;
  /** [batch][sequence][dim] token representations, padded to equal length */
  tokens: number[][][];
  /** 1 = real token, 0 = padding; same shape as tokens without dim */
  attentionMask: number[][];
  /** 1 = special marker token; same shape as attentionMask */
  specialMask: number[][];
}

export interface PoolOptions {
  includeSpecial?: boolean;
}

export class TokenizationFailure extends Error {}

export function meanPoolOne(
  tokens: number[][],
  attention: number[],
  special: number[],
  opts: PoolOptions = {},
): number[] {
  const includeSpecial = opts.includeSpecial ?? false;
  const picked: number[][] = [];
  for (let j = 0; j < tokens.length; j++) {
    if (!attention[j]) continue;
    if (!includeSpecial && special[j]) continue;
    picked.push(tokens[j]);
  }
  if (picked.length === 0) {
    throw new TokenizationFailure("no content tokens to pool over");
  }
  const dim = picked[0].length;
  const out = new Array<number>(dim).fill(0);
  for (const vec of picked) {
    for (let k = 0; k < dim; k++) out[k] += vec[k];
  }
  for (let k = 0; k < dim; k++) out[k] /= picked.length;
  return out;
}

export function meanPool(batch: TokenBatch, opts: PoolOptions = {}): number[][] {
  return batch.tokens.map((tokens, i) =>
    meanPoolOne(tokens, batch.attentionMask[i], batch.specialMask[i], opts),
  );
}
