"""Test-only oracles: dense grid search for the pair optimum and the
O(n^2) pairwise AUC statistic."""

from __future__ import annotations

import numpy as np

GRID_STEP = 0.005
GRID_LIMIT = 3.0

_grid_cache: dict[str, np.ndarray] = {}


def _grid():
    if not _grid_cache:
        g = np.arange(-GRID_LIMIT, GRID_LIMIT + GRID_STEP / 2, GRID_STEP)
        a1, a2 = np.meshgrid(g, g, indexing="ij")
        a1 = a1.ravel()
        a2 = a2.ravel()
        _grid_cache.update(
            a1=a1, a2=a2, a1sq=a1 * a1, a2sq=a2 * a2, a12=a1 * a2
        )
    return _grid_cache


def grid_best_cosine(r12: float, r1s: float, r2s: float) -> float:
    """Best cosine achievable on the dense weight grid over [-3, 3]^2.

    For unit constituents, cos(a1*r1 + a2*r2, rS) depends only on the three
    pairwise cosines, so the search is closed over scalars.
    """
    g = _grid()
    den2 = g["a1sq"] + 2.0 * r12 * g["a12"] + g["a2sq"]
    num = r1s * g["a1"] + r2s * g["a2"]
    with np.errstate(divide="ignore", invalid="ignore"):
        cos = np.where(den2 > 1e-300, num / np.sqrt(den2), -1.0)
    return float(cos.max())


def achieved_cosine(alphas, units, us) -> float:
    combo = np.asarray(alphas) @ np.asarray(units)
    return float(combo @ us / np.linalg.norm(combo))


def pairwise_auc(scores, positive) -> float:
    """P(score_pos < score_neg) + 0.5 * P(tie), brute force."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    pos = scores[positive]
    neg = scores[~positive]
    less = np.sum(pos[:, None] < neg[None, :], dtype=np.float64)
    ties = np.sum(pos[:, None] == neg[None, :], dtype=np.float64)
    return (less + 0.5 * ties) / (len(pos) * len(neg))
