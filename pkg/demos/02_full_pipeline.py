#!/usr/bin/env python3
"""The whole pipeline on the bundled 20-term fixture, via the library API.

Equivalent CLI session:

    idiolens score terms.txt store.jsonl scores.csv
    idiolens outliers scores.csv outliers.csv --tail 0.25
    idiolens hist scores.csv hist.csv --bins 10
"""

from pathlib import Path

from idiolens import ingest, score_batch
from idiolens.stats import histogram, low_tail_threshold

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

terms = ingest.read_terms(FIXTURES / "terms_20.txt")
store = ingest.load_store(FIXTURES / "store_20.jsonl")
print(f"{len(terms)} terms, store of {len(store)} vectors (dim {store.dim}, "
      f"model {store.model_id!r})")

result = score_batch(terms, store)
print(f"scored {len(result.scored)}, missing embeddings {len(result.missing)}")

ranked = sorted(result.scored, key=lambda s: (s.score, s.term))
print("\nmost idiomatic (lowest scores):")
for s in ranked[:5]:
    print(f"  {s.score:.6f}  {s.term}")
print("most self-explanatory:")
for s in ranked[-3:]:
    print(f"  {s.score:.6f}  {s.term}")

threshold = low_tail_threshold([s.score for s in ranked], tail_fraction=0.25)
outliers = [s for s in ranked if s.score <= threshold]
print(f"\n25% tail threshold: {threshold:.6f} -> {len(outliers)} outlier terms")
print("these are the terms a translator should look at first.")

h = histogram([s.score for s in ranked], bins=10)
print("\nscore density (10 bins over [0, 1]):")
for low, high, count in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts):
    print(f"  {low:.1f}-{high:.1f}  {'#' * int(count)}")
