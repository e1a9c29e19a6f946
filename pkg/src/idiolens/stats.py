"""Quantitative machinery for the evaluation pipeline: score histograms,
idiomatic-distribution estimates from annotated bin ratios, tail thresholds,
recall/precision arithmetic, ROC/AUC, and Cohen's kappa.

Everything here treats LOW scores as the idiomatic signal: a classifier at
threshold t predicts idiomatic exactly when score <= t.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    BinMismatch,
    DegenerateLabels,
    EmptyInput,
    MissingScore,
    TermSetMismatch,
)
from .ingest import AnnotatedTerm, Label


@dataclass(frozen=True)
class Histogram:
    """Counts of scores over ascending bin edges (right-open except the last bin)."""

    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def size(self) -> int:
        return int(self.counts.sum())

    @property
    def centers(self) -> np.ndarray:
        return (self.bin_edges[:-1] + self.bin_edges[1:]) / 2.0


def histogram(scores: Sequence[float], bins: int = 10) -> Histogram:
    """Histogram of scores over uniform-width bins spanning [0, 1].

    Bins are right-open except the last, which includes 1.0.
    """
    if len(scores) == 0:
        raise EmptyInput("histogram of no scores")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    arr = np.asarray(scores, dtype=np.float64)
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("scores must lie in [0, 1]")
    counts, edges = np.histogram(arr, bins=bins, range=(0.0, 1.0))
    return Histogram(bin_edges=edges, counts=counts)


@dataclass(frozen=True)
class BinRatioEstimate:
    """Per-bin idiomatic proportions measured on an annotated subsample."""

    bin_edges: np.ndarray
    annotated_counts: np.ndarray
    idiomatic_counts: np.ndarray

    @property
    def ratios(self) -> np.ndarray:
        """Idiomatic fraction per bin; bins with no annotations contribute 0."""
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(
                self.annotated_counts > 0,
                self.idiomatic_counts / np.maximum(self.annotated_counts, 1),
                0.0,
            )
        return r


def bin_ratio_estimate(
    scores_by_term: dict[str, float],
    labels: Sequence[AnnotatedTerm],
    bins: int = 10,
) -> BinRatioEstimate:
    """Bin the annotated terms by score and measure the idiomatic ratio per bin.

    ``labels`` must hold one consolidated judgment per term (see
    ``consolidate_labels``). Raises MissingScore if a labeled term has no score.
    """
    edges = np.histogram_bin_edges([], bins=bins, range=(0.0, 1.0))
    annotated = np.zeros(bins, dtype=np.int64)
    idiomatic = np.zeros(bins, dtype=np.int64)
    for ann in labels:
        if ann.term not in scores_by_term:
            raise MissingScore(ann.term)
        idx = _bin_index(scores_by_term[ann.term], edges)
        annotated[idx] += 1
        if ann.label is Label.IDIOMATIC:
            idiomatic[idx] += 1
    return BinRatioEstimate(bin_edges=edges, annotated_counts=annotated, idiomatic_counts=idiomatic)


@dataclass(frozen=True)
class IdiomaticEstimate:
    """Population-level idiomatic counts inferred as ratio x population per bin."""

    bin_edges: np.ndarray
    estimated_counts: np.ndarray
    estimated_mean: float


def estimate_idiomatic_distribution(
    h: Histogram, ratios: BinRatioEstimate
) -> IdiomaticEstimate:
    """Scale each population bin count by its annotated idiomatic ratio.

    The estimated mean is the count-weighted bin-center mean of the resulting
    distribution (NaN when the estimate carries no mass).
    """
    if h.counts.shape != ratios.annotated_counts.shape or not np.allclose(
        h.bin_edges, ratios.bin_edges, atol=1e-12
    ):
        raise BinMismatch("ratio bins do not align with histogram bins")
    estimated = h.counts * ratios.ratios
    total = float(estimated.sum())
    mean = float((estimated * h.centers).sum() / total) if total > 0 else math.nan
    return IdiomaticEstimate(bin_edges=h.bin_edges, estimated_counts=estimated, estimated_mean=mean)


def low_tail_threshold(scores: Sequence[float], tail_fraction: float = 0.05) -> float:
    """Nearest-rank threshold for the low-score tail.

    Returns the smallest score t such that the fraction of scores <= t is the
    smallest achievable fraction >= tail_fraction; selecting scores <= t
    yields the outlier set. No interpolation.
    """
    if len(scores) == 0:
        raise EmptyInput("threshold of no scores")
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must be in (0, 1], got {tail_fraction}")
    ordered = np.sort(np.asarray(scores, dtype=np.float64))
    rank = min(math.ceil(tail_fraction * len(ordered)), len(ordered))
    return float(ordered[rank - 1])


class RecallPrecision(NamedTuple):
    recall: float
    precision: float
    selected_count: int


def recall_precision_at(
    threshold: float,
    scored: Sequence,
    labels: Sequence[AnnotatedTerm],
) -> RecallPrecision:
    """Recall and precision of the score <= threshold classifier on labeled terms.

    ``scored`` items need ``term`` and ``score`` attributes; ``labels`` holds
    one judgment per term, every one of which must have a score. Precision is
    NaN when nothing is selected; recall is NaN when there are no positives.
    """
    score_of = {s.term: s.score for s in scored}
    positives = 0
    selected = 0
    true_positives = 0
    for ann in labels:
        if ann.term not in score_of:
            raise MissingScore(ann.term)
        is_pos = ann.label is Label.IDIOMATIC
        is_sel = score_of[ann.term] <= threshold
        positives += is_pos
        selected += is_sel
        true_positives += is_pos and is_sel
    recall = true_positives / positives if positives else math.nan
    precision = true_positives / selected if selected else math.nan
    return RecallPrecision(recall=recall, precision=precision, selected_count=selected)


def expected_precision(prevalence: float, recall: float, tail_fraction: float) -> float:
    """Precision implied by prevalence x recall concentrated in the selected tail.

    Computed as prevalence * recall / tail_fraction, capped at 1. The
    arithmetic runs over exact decimal rationals so that round decimal inputs
    produce round decimal answers (0.026, 0.5, 0.05 -> 0.26 exactly) instead
    of accumulating float rounding.
    """
    exact = _decimal_fraction(prevalence) * _decimal_fraction(recall) / _decimal_fraction(
        tail_fraction
    )
    return float(min(exact, Fraction(1)))


class RocPoint(NamedTuple):
    fpr: float
    tpr: float
    threshold: float


@dataclass(frozen=True)
class RocCurve:
    """Operating points of the score <= t classifier, plus trapezoidal AUC.

    Points run from (0, 0) (threshold -inf) to (1, 1) (threshold = max
    score); equal scores are grouped into one sweep step, which makes the
    trapezoidal AUC equal the tie-corrected pairwise ranking statistic.
    """

    points: tuple[RocPoint, ...]
    auc: float


def roc(scored: Sequence, labels: Sequence[AnnotatedTerm]) -> RocCurve:
    """ROC curve of the low-score classifier over labeled terms."""
    score_of = {s.term: s.score for s in scored}
    pairs = []
    for ann in labels:
        if ann.term not in score_of:
            raise MissingScore(ann.term)
        pairs.append((score_of[ann.term], ann.label is Label.IDIOMATIC))
    n_pos = sum(1 for _, pos in pairs if pos)
    n_neg = len(pairs) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels(f"need both classes, got {n_pos} positive / {n_neg} negative")
    pairs.sort(key=lambda p: p[0])

    points = [RocPoint(0.0, 0.0, -math.inf)]
    tp = fp = 0
    i = 0
    while i < len(pairs):
        j = i
        while j < len(pairs) and pairs[j][0] == pairs[i][0]:
            tp += pairs[j][1]
            fp += not pairs[j][1]
            j += 1
        points.append(RocPoint(fp / n_neg, tp / n_pos, pairs[i][0]))
        i = j

    auc = 0.0
    for a, b in zip(points, points[1:]):
        auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0
    return RocCurve(points=tuple(points), auc=auc)


class KappaResult(NamedTuple):
    agreement: float
    kappa: float | None


def cohen_kappa(a: Sequence[AnnotatedTerm], b: Sequence[AnnotatedTerm]) -> KappaResult:
    """Observed agreement and Cohen's kappa between two annotators.

    Both lists must label exactly the same term set. When expected agreement
    is 1 (both annotators constant and identical) kappa is undefined and
    reported as None; the agreement is still meaningful.
    """
    by_term_a = _labels_by_term(a)
    by_term_b = _labels_by_term(b)
    if set(by_term_a) != set(by_term_b):
        only_a = sorted(set(by_term_a) - set(by_term_b))[:3]
        only_b = sorted(set(by_term_b) - set(by_term_a))[:3]
        raise TermSetMismatch(f"annotator term sets differ (e.g. {only_a} vs {only_b})")
    terms = sorted(by_term_a)
    if not terms:
        raise EmptyInput("no annotations to compare")
    n = len(terms)
    same = sum(1 for t in terms if by_term_a[t] is by_term_b[t])
    pos_a = sum(1 for t in terms if by_term_a[t] is Label.IDIOMATIC) / n
    pos_b = sum(1 for t in terms if by_term_b[t] is Label.IDIOMATIC) / n
    observed = same / n
    expected = pos_a * pos_b + (1 - pos_a) * (1 - pos_b)
    if expected == 1.0:
        return KappaResult(agreement=observed, kappa=None)
    return KappaResult(agreement=observed, kappa=(observed - expected) / (1.0 - expected))


def consolidate_labels(annotations: Sequence[AnnotatedTerm]) -> list[AnnotatedTerm]:
    """Collapse multi-annotator labels to one judgment per term.

    A term counts as IDIOMATIC when any annotator perceived it as idiomatic
    or semi-idiomatic; otherwise SELF_EXPLANATORY. Output is ordered by
    first appearance, annotator id "consensus".
    """
    order: list[str] = []
    idiomatic: dict[str, bool] = {}
    for ann in annotations:
        if ann.term not in idiomatic:
            order.append(ann.term)
            idiomatic[ann.term] = False
        if ann.label is Label.IDIOMATIC:
            idiomatic[ann.term] = True
    return [
        AnnotatedTerm(
            term=t,
            label=Label.IDIOMATIC if idiomatic[t] else Label.SELF_EXPLANATORY,
            annotator="consensus",
        )
        for t in order
    ]


# ---------------------------------------------------------------------------
# plot-ready output files


def write_histogram_csv(h: Histogram, path: str | Path) -> None:
    """CSV with one row per bin: bin_low,bin_high,count."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["bin_low", "bin_high", "count"])
        for low, high, count in zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts):
            writer.writerow([f"{low:.6f}", f"{high:.6f}", int(count)])


def write_roc_csv(curve: RocCurve, path: str | Path) -> None:
    """CSV with one row per operating point: fpr,tpr,threshold."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["fpr", "tpr", "threshold"])
        for point in curve.points:
            writer.writerow([f"{point.fpr:.6f}", f"{point.tpr:.6f}", f"{point.threshold:.6f}"])


def write_summary_json(summary: dict, path: str | Path) -> None:
    """Canonical JSON: sorted keys, floats rounded to 6 decimals, NaN -> null."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(_jsonable(summary), indent=2, sort_keys=True, allow_nan=False))
        handle.write("\n")


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else round(value, 6)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _bin_index(score: float, edges: np.ndarray) -> int:
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score {score} outside [0, 1]")
    idx = int(np.searchsorted(edges, score, side="right")) - 1
    return min(max(idx, 0), len(edges) - 2)


def _labels_by_term(annotations: Iterable[AnnotatedTerm]) -> dict[str, Label]:
    out: dict[str, Label] = {}
    for ann in annotations:
        if ann.term in out:
            raise TermSetMismatch(f"term {ann.term!r} labeled twice by one annotator")
        out[ann.term] = ann.label
    return out


def _decimal_fraction(x: float) -> Fraction:
    if not math.isfinite(x):
        raise ValueError(f"expected a finite value, got {x}")
    return Fraction(repr(float(x)))
