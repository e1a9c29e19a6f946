#!/usr/bin/env python3
"""How the self-explainability score works, on vectors small enough to read.

A multiword term is "self-explanatory" when some weighted average of its
constituent-word embeddings points (almost) the same way as the embedding of
the whole term. The score is the best cosine any weighting can achieve, and
for two words that best weighting has a closed form.
"""

import numpy as np

from idiolens import optimal_alpha_pair, self_explainability, similarity_triple

# Two word vectors and a term vector, dim 3 so we can eyeball them.
kidney = np.array([1.0, 0.2, 0.0])
stone = np.array([0.1, 1.0, 0.0])

print("--- a compositional term -------------------------------------")
# the term's embedding is close to the plane spanned by its words
kidney_stone = 0.9 * kidney + 0.8 * stone + np.array([0.0, 0.0, 0.15])
t = similarity_triple(kidney, stone, kidney_stone)
print(f"pairwise cosines: r12={t.r12:.3f}  r1S={t.r1s:.3f}  r2S={t.r2s:.3f}")
print(f"optimal weights:  {optimal_alpha_pair(t).round(3)}")
result = self_explainability([kidney, stone], kidney_stone)
print(f"score: {result.score:.4f}  (high: the words explain the term)")

print()
print("--- an idiomatic term ----------------------------------------")
# the term's embedding points mostly OUT of the constituent plane:
# whatever mix of the words you take, it cannot follow
gray = np.array([1.0, 0.0, 0.0])
matter = np.array([0.0, 1.0, 0.0])
gray_matter = np.array([0.25, 0.1, 1.0])
result = self_explainability([gray, matter], gray_matter)
print(f"score: {result.score:.4f}  (low: meaning lives outside the words)")
print(f"weights: {result.alphas.round(3)}")

print()
print("--- orthogonal words: weights are just the cosines -----------")
rng = np.random.default_rng(0)
term = rng.standard_normal(3)
t = similarity_triple(gray, matter, term)
print(f"r1S={t.r1s:.4f}  r2S={t.r2s:.4f}")
print(f"alphas={optimal_alpha_pair(t).round(4)}  (equal because r12=0)")

print()
print("--- invariances ----------------------------------------------")
base = self_explainability([kidney, stone], kidney_stone).score
scaled = self_explainability([5.0 * kidney, 0.01 * stone], 42.0 * kidney_stone).score
swapped = self_explainability([stone, kidney], kidney_stone).score
print(f"base={base:.12f}")
print(f"rescaled inputs: {scaled:.12f}  (lengths never matter)")
print(f"swapped words:   {swapped:.12f}  (order never matters)")
