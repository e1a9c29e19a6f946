"""Self-explainability scoring for multiword terms.

A term's score is the maximal cosine between its embedding and a weighted
average of its constituents' embeddings. For two constituents the optimum has
a closed form in the pairwise cosines; for more constituents the same optimum
is the solution of the Gram linear system (equivalently, the orthogonal
projection of the term vector onto the constituent span). Because the
unconstrained maximum equals the projection cosine, scores always land in
[0, 1]; low scores mean the constituents cannot explain the term.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .errors import CollinearConstituents, DimMismatch, EmptyInput, MissingEmbedding
from .vectors import (
    EmbeddingVector,
    SimilarityTriple,
    as_vector,
    normalize,
    similarity_triple,
)

#: |r12| at or above 1 - COLLINEAR_TOL means the constituent span collapsed
#: to a line and the pair closed form is singular.
COLLINEAR_TOL = 1e-9

#: A combination vector with norm below this is treated as zero (the term
#: vector is orthogonal to the constituent span).
_NULL_COMBO_TOL = 1e-12


def optimal_alpha_pair(t: SimilarityTriple) -> np.ndarray:
    """Closed-form optimal mixing weights for two constituents.

    Expects cosines of unit-normalized vectors. Returns (a1, a2) with

        a1 = r1s - r12 * r2s
        a2 = r2s - r12 * r1s

    which maximizes the cosine between ``a1*r1 + a2*r2`` and the term vector
    over all weight pairs. Only the direction of (a1, a2) matters; any
    positive rescaling achieves the same cosine.

    Raises CollinearConstituents when |r12| >= 1 - 1e-9; the caller should
    fall back to a single-constituent score (see ``self_explainability``).
    """
    if abs(t.r12) >= 1.0 - COLLINEAR_TOL:
        raise CollinearConstituents(f"|r12| = {abs(t.r12)} leaves no plane to mix in")
    a1 = t.r1s - t.r12 * t.r2s
    a2 = t.r2s - t.r12 * t.r1s
    return np.array([a1, a2], dtype=np.float64)


def optimal_alpha_general(
    constituents: Sequence[EmbeddingVector], r_sigma: EmbeddingVector
) -> np.ndarray:
    """Optimal mixing weights for any number of constituents.

    Unit-normalizes everything and solves the Gram system G a = b with
    G[i, j] = ri · rj and b[i] = ri · rS, i.e. least-squares projection of
    the term vector onto the constituent span. A rank-deficient Gram matrix
    is handled by the minimum-norm solution rather than an error.

    For n = 2 the result is the pair closed form scaled by the positive
    factor 1 / (1 - r12^2), so both achieve the same cosine.
    """
    alphas, _ = _solve_gram(_unit_stack(constituents), normalize(r_sigma))
    return alphas


@dataclass(frozen=True)
class ScoreResult:
    """Score plus the weights that achieved it.

    ``degenerate`` is set when the regular optimum was unavailable: collinear
    constituents, a rank-deficient Gram system, or a term vector orthogonal
    to the whole constituent span (score 0, all-zero weights).
    """

    score: float
    alphas: np.ndarray
    degenerate: bool = False


@dataclass(frozen=True)
class ScoredTerm:
    """A term together with its self-explainability score."""

    term: str
    constituents: tuple[str, ...]
    score: float
    alphas: np.ndarray
    degenerate: bool = False

    @property
    def has_negative_alpha(self) -> bool:
        return bool(np.any(self.alphas < 0.0))


def self_explainability(
    constituents: Sequence[EmbeddingVector], r_sigma: EmbeddingVector
) -> ScoreResult:
    """Maximal cosine between the term vector and a weighted constituent average.

    Equals the cosine between the term vector and its orthogonal projection
    onto the constituent span, hence always in [0, 1]. Inputs are
    unit-normalized internally; the result is invariant under positive
    rescaling of any input and under constituent permutation.
    """
    if len(constituents) < 2:
        raise EmptyInput("need at least 2 constituent vectors")
    units = _unit_stack(constituents)
    us = normalize(r_sigma)
    if units.shape[1] != us.shape[0]:
        raise DimMismatch(f"dims differ: {units.shape[1]} vs {us.shape[0]}")

    if len(constituents) == 2:
        t = similarity_triple(units[0], units[1], us)
        try:
            alphas = optimal_alpha_pair(t)
        except CollinearConstituents:
            # span is a line: the best mix is +-r1 alone
            return ScoreResult(score=abs(t.r1s), alphas=np.array([1.0, 0.0]), degenerate=True)
        degenerate = False
    else:
        alphas, degenerate = _solve_gram(units, us)

    # elementwise products summed (not BLAS gemv) so that swapping the two
    # constituents swaps the addends and leaves the score bitwise unchanged
    combo = (alphas[:, None] * units).sum(axis=0)
    combo_norm = float(np.linalg.norm(combo))
    if combo_norm < _NULL_COMBO_TOL:
        # term vector orthogonal to the span: nothing to explain it with
        return ScoreResult(score=0.0, alphas=alphas, degenerate=True)
    score = float(combo @ us) / combo_norm
    return ScoreResult(score=float(np.clip(score, 0.0, 1.0)), alphas=alphas, degenerate=degenerate)


class VectorLookup(Protocol):
    """Read-only mapping from exact text to its embedding vector."""

    def get(self, text: str) -> EmbeddingVector | None: ...


@dataclass
class BatchResult:
    """Outcome of scoring a list of terms against a store."""

    scored: list[ScoredTerm] = field(default_factory=list)
    missing: list[MissingEmbedding] = field(default_factory=list)

    @property
    def negative_alpha_terms(self) -> list[str]:
        return [s.term for s in self.scored if s.has_negative_alpha]


def score_batch(terms: Sequence, store: VectorLookup) -> BatchResult:
    """Score every term whose vectors are all present; report the rest.

    ``terms`` is a sequence of TermRecord-like objects with ``term`` and
    ``constituents`` attributes, each with >= 2 constituents. Output order
    follows input order. Terms with any missing embedding are collected in
    the result's ``missing`` list instead of being silently dropped.
    """
    result = BatchResult()
    for record in terms:
        keys = [record.term, *record.constituents]
        vectors = [store.get(k) for k in keys]
        absent = [k for k, v in zip(keys, vectors) if v is None]
        if absent:
            result.missing.append(MissingEmbedding(record.term, absent))
            continue
        r_sigma = as_vector(vectors[0])
        parts = self_explainability([as_vector(v) for v in vectors[1:]], r_sigma)
        result.scored.append(
            ScoredTerm(
                term=record.term,
                constituents=tuple(record.constituents),
                score=parts.score,
                alphas=parts.alphas,
                degenerate=parts.degenerate,
            )
        )
    return result


def _unit_stack(constituents: Sequence[EmbeddingVector]) -> np.ndarray:
    if len(constituents) == 0:
        raise EmptyInput("no constituent vectors")
    units = [normalize(v) for v in constituents]
    dims = {u.shape[0] for u in units}
    if len(dims) > 1:
        raise DimMismatch(f"constituent dims differ: {sorted(dims)}")
    return np.stack(units)


def _solve_gram(units: np.ndarray, us: np.ndarray) -> tuple[np.ndarray, bool]:
    """Minimum-norm solution of the projection system; flags rank deficiency."""
    gram = units @ units.T
    b = units @ us
    alphas, _, rank, _ = np.linalg.lstsq(gram, b, rcond=None)
    return alphas, bool(rank < units.shape[0])
