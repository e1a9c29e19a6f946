#!/usr/bin/env python3
"""The evaluation machinery: ROC/AUC against annotations, the tail operating
point, the population-arithmetic expected precision, and annotator agreement.

Mirrors what `idiolens eval scores.csv annotations.csv` writes as JSON/CSV.
"""

import numpy as np

from idiolens import cohen_kappa, expected_precision, recall_precision_at, roc
from idiolens.ingest import AnnotatedTerm, Label
from idiolens.scorer import ScoredTerm
from idiolens.stats import consolidate_labels, low_tail_threshold

rng = np.random.default_rng(7)

# A synthetic population: 4% idiomatic terms scoring low, the rest high.
n_idio, n_rest = 40, 960
scores = np.concatenate([
    np.clip(rng.normal(0.45, 0.12, n_idio), 0, 1),
    np.clip(rng.normal(0.80, 0.10, n_rest), 0, 1),
])
terms = [f"term {i:04d}" for i in range(len(scores))]
scored = [ScoredTerm(t, tuple(t.split()), float(s), np.ones(2))
          for t, s in zip(terms, scores)]

# Two annotators who mostly agree on what is idiomatic.
truth = [i < n_idio for i in range(len(terms))]
annotations = []
for who, flip_rate in (("A1", 0.02), ("A2", 0.05)):
    flips = rng.random(len(terms)) < flip_rate
    for term, is_idio, flip in zip(terms, truth, flips):
        label = Label.IDIOMATIC if (is_idio ^ flip) else Label.SELF_EXPLANATORY
        annotations.append(AnnotatedTerm(term, label, who))

labels = consolidate_labels(annotations)
curve = roc(scored, labels)
print(f"AUC: {curve.auc:.3f}  ({len(curve.points)} operating points)")

threshold = low_tail_threshold([s.score for s in scored], tail_fraction=0.05)
recall, precision, selected = recall_precision_at(threshold, scored, labels)
print(f"5% tail operating point: threshold {threshold:.3f}")
print(f"  recall {recall:.2f}, precision {precision:.2f}, {selected} terms selected")

prevalence = sum(1 for a in labels if a.label is Label.IDIOMATIC) / len(labels)
print(f"  prevalence {prevalence:.3f} -> expected precision "
      f"{expected_precision(prevalence, recall, 0.05):.2f}")

a1 = [a for a in annotations if a.annotator == "A1"]
a2 = [a for a in annotations if a.annotator == "A2"]
agreement, kappa = cohen_kappa(a1, a2)
print(f"annotators: agreement {agreement:.3f}, kappa {kappa:.3f}")

print("\nthe arithmetic in one line: prevalence x recall / tail = precision "
      "you should expect inside the tail;")
print(f"e.g. expected_precision(0.026, 0.5, 0.05) = "
      f"{expected_precision(0.026, 0.5, 0.05)}")
