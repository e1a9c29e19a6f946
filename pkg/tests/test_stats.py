import math
from typing import NamedTuple

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from idiolens import errors, stats
from idiolens.ingest import AnnotatedTerm, Label


class Scored(NamedTuple):
    term: str
    score: float


def annotate(pairs, annotator="A1"):
    return [
        AnnotatedTerm(term, Label.IDIOMATIC if pos else Label.SELF_EXPLANATORY, annotator)
        for term, pos in pairs
    ]


class TestHistogram:
    def test_boundary_values(self):
        h = stats.histogram([0.0, 0.5, 1.0], bins=2)
        assert list(h.counts) == [1, 2]

    def test_uniform_counts_within_three_sigma(self):
        rng = np.random.default_rng(21)
        h = stats.histogram(rng.random(1000), bins=10)
        sigma = math.sqrt(1000 * 0.1 * 0.9)
        assert all(abs(c - 100) <= 3 * sigma for c in h.counts)

    def test_all_equal_scores(self):
        h = stats.histogram([0.42] * 7, bins=10)
        assert h.counts[4] == 7
        assert h.size == 7

    def test_empty_raises(self):
        with pytest.raises(errors.EmptyInput):
            stats.histogram([], bins=4)

    def test_counts_sum_to_sample_size(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            scores = rng.random(rng.integers(1, 200))
            assert stats.histogram(scores, bins=7).size == len(scores)


class TestEstimateIdiomaticDistribution:
    @staticmethod
    def ratio_estimate(edges, annotated, idiomatic):
        return stats.BinRatioEstimate(
            bin_edges=edges,
            annotated_counts=np.asarray(annotated),
            idiomatic_counts=np.asarray(idiomatic),
        )

    def test_all_ratios_one_reproduces_histogram(self):
        h = stats.histogram([0.1, 0.3, 0.5, 0.9], bins=4)
        ratios = self.ratio_estimate(h.bin_edges, [1] * 4, [1] * 4)
        est = stats.estimate_idiomatic_distribution(h, ratios)
        assert np.allclose(est.estimated_counts, h.counts)

    def test_all_ratios_zero(self):
        h = stats.histogram([0.1, 0.9], bins=4)
        ratios = self.ratio_estimate(h.bin_edges, [1] * 4, [0] * 4)
        est = stats.estimate_idiomatic_distribution(h, ratios)
        assert np.allclose(est.estimated_counts, 0.0)
        assert math.isnan(est.estimated_mean)

    def test_two_population_mixture_separates_means(self):
        # low-score idiomatic component vs high-score rest, mirrored through
        # bin ratios taken from a small annotated subsample
        rng = np.random.default_rng(23)
        idiomatic = np.clip(rng.normal(0.3, 0.08, size=400), 0, 1)
        rest = np.clip(rng.normal(0.8, 0.08, size=3600), 0, 1)
        scores = np.concatenate([idiomatic, rest])
        labels = np.concatenate([np.ones(400, bool), np.zeros(3600, bool)])
        h = stats.histogram(scores, bins=10)

        sample = rng.choice(len(scores), size=600, replace=False)
        score_of = {f"t{i}": float(scores[i]) for i in sample}
        anns = annotate((f"t{i}", bool(labels[i])) for i in sample)
        ratios = stats.bin_ratio_estimate(score_of, anns, bins=10)
        est = stats.estimate_idiomatic_distribution(h, ratios)

        overall_mean = float(np.mean(scores))
        assert est.estimated_mean < overall_mean
        assert est.estimated_mean == pytest.approx(0.3, abs=0.08)
        assert abs(est.estimated_counts.sum() - 400) < 120

    def test_bin_mismatch(self):
        h = stats.histogram([0.5], bins=4)
        ratios = self.ratio_estimate(np.linspace(0, 1, 6), [1] * 5, [0] * 5)
        with pytest.raises(errors.BinMismatch):
            stats.estimate_idiomatic_distribution(h, ratios)


class TestLowTailThreshold:
    def test_uniform_grid(self):
        scores = [i / 100 for i in range(1, 101)]
        t = stats.low_tail_threshold(scores, 0.05)
        assert t == 0.05
        assert sum(1 for s in scores if s <= t) == 5

    def test_nearest_rank_by_hand(self):
        assert stats.low_tail_threshold([0.2, 0.4, 0.6, 0.8], 0.5) == 0.4

    def test_single_score(self):
        assert stats.low_tail_threshold([0.7], 0.05) == 0.7

    def test_empty(self):
        with pytest.raises(errors.EmptyInput):
            stats.low_tail_threshold([], 0.05)

    def test_full_tail_selects_everything(self):
        scores = [0.9, 0.1, 0.5]
        assert stats.low_tail_threshold(scores, 1.0) == 0.9

    @settings(max_examples=50)
    @given(
        st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=60),
        st.floats(0.01, 1.0),
        st.floats(0.01, 1.0),
    )
    def test_monotone_in_tail_fraction(self, scores, f1, f2):
        lo, hi = sorted((f1, f2))
        t_lo = stats.low_tail_threshold(scores, lo)
        t_hi = stats.low_tail_threshold(scores, hi)
        assert t_lo <= t_hi
        selected_lo = sum(1 for s in scores if s <= t_lo)
        selected_hi = sum(1 for s in scores if s <= t_hi)
        assert selected_lo <= selected_hi


class TestRecallPrecisionAt:
    def test_hand_counts(self):
        scored = [Scored(f"t{i}", i / 10) for i in range(1, 11)]
        labels = annotate([("t1", True), ("t6", True)] + [(f"t{i}", False) for i in (2, 3, 4, 5, 7, 8, 9, 10)])
        rp = stats.recall_precision_at(0.4, scored, labels)
        assert rp == (0.5, 0.25, 4)

    def test_threshold_below_everything(self):
        scored = [Scored("a", 0.5), Scored("b", 0.6)]
        labels = annotate([("a", True), ("b", False)])
        rp = stats.recall_precision_at(0.1, scored, labels)
        assert rp.recall == 0.0
        assert math.isnan(rp.precision)
        assert rp.selected_count == 0

    def test_threshold_above_everything(self):
        scored = [Scored("a", 0.5), Scored("b", 0.6), Scored("c", 0.7), Scored("d", 0.8)]
        labels = annotate([("a", True), ("b", False), ("c", False), ("d", False)])
        rp = stats.recall_precision_at(1.0, scored, labels)
        assert rp.recall == 1.0
        assert rp.precision == 0.25  # prevalence
        assert rp.selected_count == 4

    def test_missing_score(self):
        with pytest.raises(errors.MissingScore):
            stats.recall_precision_at(0.5, [Scored("a", 0.5)], annotate([("zzz", True)]))


class TestExpectedPrecision:
    def test_paper_arithmetic_exact(self):
        assert stats.expected_precision(0.026, 0.5, 0.05) == 0.26

    def test_select_everything(self):
        for p in (0.013, 0.3, 0.9):
            assert stats.expected_precision(p, 1.0, 1.0) == p

    def test_cap_at_one(self):
        assert stats.expected_precision(0.5, 1.0, 0.25) == 1.0

    @settings(max_examples=200)
    @given(
        st.integers(1, 999), st.integers(1, 1000), st.integers(1, 1000)
    )
    def test_product_identity_uncapped(self, p_milli, r_milli, f_milli):
        # on the exact decimal rationals the defining identity holds with no
        # rounding: expected * tail == prevalence * recall
        from fractions import Fraction

        p, r, f = p_milli / 1000, r_milli / 1000, f_milli / 1000
        expected = stats.expected_precision(p, r, f)
        exact = Fraction(p_milli, 1000) * Fraction(r_milli, 1000) / Fraction(f_milli, 1000)
        if exact < 1:
            assert expected == float(exact)
            assert exact * Fraction(f_milli, 1000) == Fraction(p_milli, 1000) * Fraction(
                r_milli, 1000
            )
        else:
            assert expected == 1.0


class TestRoc:
    def test_perfect_separation(self):
        scored = [Scored(f"p{i}", 0.1 + 0.01 * i) for i in range(5)]
        scored += [Scored(f"n{i}", 0.8 + 0.01 * i) for i in range(5)]
        labels = annotate([(f"p{i}", True) for i in range(5)] + [(f"n{i}", False) for i in range(5)])
        curve = stats.roc(scored, labels)
        assert curve.auc == pytest.approx(1.0, abs=1e-12)

    def test_independent_labels_near_half(self):
        rng = np.random.default_rng(24)
        scores = rng.permutation(np.linspace(0.001, 0.999, 1000))
        labels_bool = rng.random(1000) < 0.5
        scored = [Scored(f"t{i}", float(s)) for i, s in enumerate(scores)]
        labels = annotate((f"t{i}", bool(b)) for i, b in enumerate(labels_bool))
        assert stats.roc(scored, labels).auc == pytest.approx(0.5, abs=0.05)

    def test_matches_pairwise_oracle_with_ties(self):
        rng = np.random.default_rng(25)
        for _ in range(30):
            n = int(rng.integers(10, 400))
            scores = np.round(rng.random(n), 2)  # heavy ties
            labels_bool = rng.random(n) < 0.4
            if labels_bool.all() or not labels_bool.any():
                labels_bool[0] = True
                labels_bool[1] = False
            scored = [Scored(f"t{i}", float(s)) for i, s in enumerate(scores)]
            labels = annotate((f"t{i}", bool(b)) for i, b in enumerate(labels_bool))
            auc = stats.roc(scored, labels).auc
            assert abs(auc - helpers.pairwise_auc(scores, labels_bool)) <= 1e-9

    def test_curve_monotone_with_unit_endpoints(self):
        rng = np.random.default_rng(26)
        scores = np.round(rng.random(100), 1)
        labels_bool = rng.random(100) < 0.3
        labels_bool[0] = True
        labels_bool[1] = False
        scored = [Scored(f"t{i}", float(s)) for i, s in enumerate(scores)]
        labels = annotate((f"t{i}", bool(b)) for i, b in enumerate(labels_bool))
        curve = stats.roc(scored, labels)
        assert curve.points[0][:2] == (0.0, 0.0)
        assert curve.points[-1][:2] == (1.0, 1.0)
        for a, b in zip(curve.points, curve.points[1:]):
            assert b.fpr >= a.fpr and b.tpr >= a.tpr

    def test_single_class_raises(self):
        scored = [Scored("a", 0.1), Scored("b", 0.2)]
        with pytest.raises(errors.DegenerateLabels):
            stats.roc(scored, annotate([("a", True), ("b", True)]))

    def test_missing_score_raises(self):
        with pytest.raises(errors.MissingScore):
            stats.roc([Scored("a", 0.1)], annotate([("a", True), ("gone", False)]))


class TestCohenKappa:
    def test_identical_mixed_lists(self):
        a = annotate([("t1", True), ("t2", False), ("t3", True)], "A1")
        b = annotate([("t1", True), ("t2", False), ("t3", True)], "A2")
        result = stats.cohen_kappa(a, b)
        assert result.agreement == 1.0
        assert result.kappa == 1.0

    def test_half_agreement_zero_kappa(self):
        a = annotate([("t1", True), ("t2", True), ("t3", False), ("t4", False)], "A1")
        b = annotate([("t1", True), ("t2", False), ("t3", True), ("t4", False)], "A2")
        result = stats.cohen_kappa(a, b)
        assert result.agreement == 0.5
        assert result.kappa == 0.0

    def test_confusion_matrix_oracle(self):
        # 45 both idiomatic, 15 only A, 25 only B, 15 neither
        pairs = [(True, True)] * 45 + [(True, False)] * 15 + [(False, True)] * 25 \
            + [(False, False)] * 15
        a = annotate([(f"t{i}", x) for i, (x, _) in enumerate(pairs)], "A1")
        b = annotate([(f"t{i}", y) for i, (_, y) in enumerate(pairs)], "A2")
        result = stats.cohen_kappa(a, b)
        po = (45 + 15) / 100
        pe = 0.60 * 0.70 + 0.40 * 0.30
        assert result.agreement == pytest.approx(po, abs=1e-15)
        assert result.kappa == pytest.approx((po - pe) / (1 - pe), abs=1e-12)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(27)
        for _ in range(100):
            n = int(rng.integers(2, 50))
            xa = rng.random(n) < 0.5
            xb = rng.random(n) < 0.5
            a = annotate([(f"t{i}", bool(v)) for i, v in enumerate(xa)], "A1")
            b = annotate([(f"t{i}", bool(v)) for i, v in enumerate(xb)], "A2")
            fwd = stats.cohen_kappa(a, b)
            rev = stats.cohen_kappa(b, a)
            assert fwd.agreement == rev.agreement
            assert fwd.kappa == rev.kappa

    def test_kappa_at_most_agreement(self):
        rng = np.random.default_rng(28)
        for _ in range(100):
            n = int(rng.integers(2, 50))
            xa = rng.random(n) < 0.4
            xb = rng.random(n) < 0.6
            a = annotate([(f"t{i}", bool(v)) for i, v in enumerate(xa)], "A1")
            b = annotate([(f"t{i}", bool(v)) for i, v in enumerate(xb)], "A2")
            result = stats.cohen_kappa(a, b)
            if result.kappa is not None:
                assert result.kappa <= result.agreement + 1e-12
                assert result.agreement <= 1.0

    def test_constant_identical_annotators_have_no_kappa(self):
        a = annotate([("t1", True), ("t2", True)], "A1")
        b = annotate([("t1", True), ("t2", True)], "A2")
        result = stats.cohen_kappa(a, b)
        assert result.agreement == 1.0
        assert result.kappa is None

    def test_term_set_mismatch(self):
        a = annotate([("t1", True)], "A1")
        b = annotate([("t2", True)], "A2")
        with pytest.raises(errors.TermSetMismatch):
            stats.cohen_kappa(a, b)


class TestConsolidateLabels:
    def test_any_idiomatic_wins(self):
        anns = annotate([("x y", False)], "A1") + annotate([("x y", True)], "A2")
        (merged,) = stats.consolidate_labels(anns)
        assert merged.label is Label.IDIOMATIC

    def test_unanimous_self_explanatory(self):
        anns = annotate([("x y", False)], "A1") + annotate([("x y", False)], "A2")
        (merged,) = stats.consolidate_labels(anns)
        assert merged.label is Label.SELF_EXPLANATORY


class TestWriters:
    def test_histogram_csv(self, tmp_path):
        h = stats.histogram([0.05, 0.5, 0.95, 0.95], bins=2)
        out = tmp_path / "h.csv"
        stats.write_histogram_csv(h, out)
        assert out.read_text() == (
            "bin_low,bin_high,count\n0.000000,0.500000,1\n0.500000,1.000000,3\n"
        )

    def test_summary_json_nan_becomes_null(self, tmp_path):
        out = tmp_path / "s.json"
        stats.write_summary_json({"a": math.nan, "b": 0.26, "c": None}, out)
        assert out.read_text() == '{\n  "a": null,\n  "b": 0.26,\n  "c": null\n}\n'

    def test_roc_csv_first_row_is_origin(self, tmp_path):
        scored = [Scored("a", 0.2), Scored("b", 0.8)]
        curve = stats.roc(scored, annotate([("a", True), ("b", False)]))
        out = tmp_path / "roc.csv"
        stats.write_roc_csv(curve, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "fpr,tpr,threshold"
        assert lines[1] == "0.000000,0.000000,-inf"
