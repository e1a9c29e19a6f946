"""Dense real-vector primitives: normalization, cosines, weighted sums, Gram matrices.

All arithmetic is done in 64-bit floats regardless of how vectors are stored;
the downstream weight formula subtracts near-equal products and loses precision
at 32-bit. Cosines are clamped to [-1, 1] after computation so rounding noise
never leaks out of range.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AllZeroWeights, DimMismatch, EmptyInput, ZeroVector

#: An embedding vector is a 1-D float64 ndarray. ``as_vector`` is the
#: validation entry point for anything coming from outside the package.
EmbeddingVector = np.ndarray


def as_vector(values: Sequence[float] | np.ndarray) -> EmbeddingVector:
    """Validate and convert ``values`` into a 1-D float64 vector.

    Rejects empty and non-finite input outright rather than normalizing it
    away: NaN/Inf components indicate upstream export bugs.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or v.size < 1:
        raise DimMismatch(f"expected a 1-D vector with dim >= 1, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ZeroVector("vector has non-finite components")
    return v


@dataclass(frozen=True)
class SimilarityTriple:
    """Pairwise cosines of two constituent vectors and a whole-term vector.

    Each field is the cosine of unit vectors, so it lies in [-1, 1]
    (self-similarities are 1 by construction and not stored).
    """

    r12: float
    r1s: float
    r2s: float


def norm(v: EmbeddingVector) -> float:
    """Euclidean norm."""
    return float(np.linalg.norm(as_vector(v)))


def normalize(v: EmbeddingVector) -> EmbeddingVector:
    """Scale ``v`` to unit Euclidean norm, preserving direction.

    Raises ZeroVector when the norm is zero or any component is non-finite.
    """
    v = as_vector(v)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ZeroVector("cannot normalize a zero vector")
    return v / n


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimMismatch(f"dims differ: {a.shape[0]} vs {b.shape[0]}")


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine similarity of two nonzero vectors, clamped to [-1, 1].

    Symmetric and invariant under positive rescaling of either argument.
    """
    a = as_vector(a)
    b = as_vector(b)
    _check_same_dim(a, b)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for zero vectors")
    return float(np.clip(float(a @ b) / (na * nb), -1.0, 1.0))


def weighted_sum(vectors: Iterable[EmbeddingVector], weights: Iterable[float]) -> EmbeddingVector:
    """Componentwise sum of ``weights[i] * vectors[i]``."""
    vecs = [as_vector(v) for v in vectors]
    w = np.asarray(list(weights), dtype=np.float64)
    if not vecs or w.size == 0:
        raise EmptyInput("weighted_sum needs at least one vector and one weight")
    if len(vecs) != w.size:
        raise DimMismatch(f"{len(vecs)} vectors but {w.size} weights")
    for v in vecs[1:]:
        _check_same_dim(vecs[0], v)
    if not np.any(w != 0.0):
        raise AllZeroWeights("all weights are zero")
    return (w[:, None] * np.stack(vecs)).sum(axis=0)


def similarity_triple(
    r1: EmbeddingVector, r2: EmbeddingVector, r_sigma: EmbeddingVector
) -> SimilarityTriple:
    """Cosines (r1·r2, r1·rΣ, r2·rΣ) of the unit-normalized inputs."""
    u1 = normalize(r1)
    u2 = normalize(r2)
    us = normalize(r_sigma)
    _check_same_dim(u1, u2)
    _check_same_dim(u1, us)
    clamp = lambda x: float(np.clip(x, -1.0, 1.0))
    return SimilarityTriple(
        r12=clamp(u1 @ u2),
        r1s=clamp(u1 @ us),
        r2s=clamp(u2 @ us),
    )


def gram_matrix(vectors: Sequence[EmbeddingVector]) -> np.ndarray:
    """Matrix of pairwise dot products G[i, j] = v_i · v_j."""
    if len(vectors) == 0:
        raise EmptyInput("gram_matrix of an empty list")
    stacked = np.stack([as_vector(v) for v in vectors])
    return stacked @ stacked.T
