"""idiolens: idiomaticity scoring for multiword terms from embedding geometry.

A term is self-explanatory to the extent that some weighted average of its
constituent-word embeddings points the same way as the embedding of the whole
term; terms where no mix comes close are the idiomatic ones. The package
computes that score in closed form, applies it across term inventories, and
provides the evaluation stack around it (filtering, thresholds, ROC/AUC,
annotation agreement).
"""

from . import embed_client, errors, ingest, scorer, stats, vectors
from .ingest import AnnotatedTerm, EmbeddingStore, Label, TermRecord
from .scorer import (
    BatchResult,
    ScoredTerm,
    ScoreResult,
    optimal_alpha_general,
    optimal_alpha_pair,
    score_batch,
    self_explainability,
)
from .stats import (
    RocCurve,
    cohen_kappa,
    expected_precision,
    histogram,
    low_tail_threshold,
    recall_precision_at,
    roc,
)
from .vectors import SimilarityTriple, cosine, normalize, similarity_triple, weighted_sum

__version__ = "0.1.0"

__all__ = [
    "AnnotatedTerm",
    "BatchResult",
    "EmbeddingStore",
    "Label",
    "RocCurve",
    "ScoreResult",
    "ScoredTerm",
    "SimilarityTriple",
    "TermRecord",
    "cohen_kappa",
    "cosine",
    "embed_client",
    "errors",
    "expected_precision",
    "histogram",
    "ingest",
    "low_tail_threshold",
    "normalize",
    "optimal_alpha_general",
    "optimal_alpha_pair",
    "recall_precision_at",
    "roc",
    "score_batch",
    "scorer",
    "self_explainability",
    "similarity_triple",
    "stats",
    "vectors",
    "weighted_sum",
]
