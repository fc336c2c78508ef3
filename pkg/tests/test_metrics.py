"""Unit and property tests for the exact metric evaluators."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import rankregret as rr
from rankregret import MetricKind, MetricSpec
from rankregret.errors import UndefinedMetricError

AUC = MetricSpec(MetricKind.AUC)
NDCG = MetricSpec(MetricKind.NDCG)
MAP = MetricSpec(MetricKind.MAP)
MRR = MetricSpec(MetricKind.MRR)


def spec_p(k):
    return MetricSpec(MetricKind.PRECISION_AT_K, k=k)

def spec_r(k):
    return MetricSpec(MetricKind.RECALL_AT_K, k=k)


class TestRankByScores:
    def test_distinct_values(self):
        assert rr.rank_by_scores([0.2, 0.9, 0.5]).tolist() == [1, 2, 0]

    def test_tie_broken_by_index(self):
        assert rr.rank_by_scores([0.5, 0.5]).tolist() == [0, 1]

    def test_already_sorted(self):
        assert rr.rank_by_scores([0.9, 0.8, 0.7, 0.6]).tolist() == [0, 1, 2, 3]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            rr.rank_by_scores([])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            rr.rank_by_scores([0.1, float("nan")])

    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=30))
    def test_is_bijection_and_sorts(self, scores):
        perm = rr.rank_by_scores(scores)
        assert sorted(perm.tolist()) == list(range(len(scores)))
        ranked = np.asarray(scores)[perm]
        assert np.all(np.diff(ranked) <= 0)

    @given(
        st.lists(st.integers(-10_000, 10_000), min_size=1, max_size=20),
        st.sampled_from([0.25, 0.5, 1.0, 2.0, 4.0]),
        st.integers(-8, 8),
    )
    def test_monotone_transform_invariance(self, scores, scale, shift):
        # Power-of-two scales and integer inputs keep the transform exact
        # in floating point, so the mathematical invariance is testable.
        base = rr.rank_by_scores([float(s) for s in scores])
        transformed = rr.rank_by_scores([scale * s + shift for s in scores])
        assert base.tolist() == transformed.tolist()


class TestEvalMetric:
    def test_auc_pair_count(self):
        assert rr.eval_metric(AUC, [1, 0, 1, 0], [0, 1, 2, 3]) == 0.75

    def test_ndcg_single_positive_second(self):
        value = rr.eval_metric(NDCG, [0, 1], [0, 1])
        assert value == pytest.approx(1 / math.log2(3), rel=1e-14)

    def test_map_two_positives(self):
        assert rr.eval_metric(MAP, [1, 0, 1, 0], [0, 1, 2, 3]) == pytest.approx(5 / 6)

    def test_mrr_first_relevant_second(self):
        assert rr.eval_metric(MRR, [0, 1, 0], [0, 1, 2]) == 0.5

    def test_precision_recall_at_2(self):
        labels = [1, 0, 1, 0]
        perm = [0, 1, 2, 3]
        assert rr.eval_metric(spec_p(2), labels, perm) == 0.5
        assert rr.eval_metric(spec_r(2), labels, perm) == 0.5

    def test_auc_one_class_rejected(self):
        with pytest.raises(UndefinedMetricError):
            rr.eval_metric(AUC, [1, 1], [0, 1])

    def test_k_beyond_length_rejected(self):
        with pytest.raises(ValueError):
            rr.eval_metric(MetricSpec(MetricKind.NDCG, k=5), [1, 0], [0, 1])

    def test_mrr_without_positives_warns_zero(self):
        with pytest.warns(UserWarning):
            assert rr.eval_metric(MRR, [0, 0], [0, 1]) == 0.0

    def test_accuracy_threshold_strict(self):
        assert rr.eval_accuracy([1, 0], [0.5, 0.2], tau=0.5) == 0.5
        assert rr.eval_accuracy([1, 0], [0.6, 0.2], tau=0.5) == 1.0

    def test_accuracy_at_split(self):
        assert rr.accuracy_at_split([1, 0, 1], [0, 2, 1], 2) == 1.0
        assert rr.accuracy_at_split([1, 0, 1], [0, 1, 2], 0) == pytest.approx(1 / 3)


class TestIdealValues:
    def test_normalized_metrics_ideal_one(self):
        labels = [0, 1, 1, 0, 0]
        for spec in (AUC, NDCG, MAP, MRR, spec_r(3)):
            assert rr.ideal_value(spec, labels) == pytest.approx(1.0)

    def test_precision_ideal_capped_by_positives(self):
        assert rr.ideal_value(spec_p(3), [1, 1, 0, 0]) == pytest.approx(2 / 3)

    def test_recall_ideal_capped_by_depth(self):
        assert rr.ideal_value(spec_r(1), [1, 1, 0, 0]) == pytest.approx(1 / 2)

    def test_idcg_accessor(self):
        assert rr.ideal_dcg(2, k=2, log_base=2.0) == pytest.approx(
            1 + 1 / math.log2(3), rel=1e-14
        )
        assert rr.ideal_dcg(0) == 0.0


class TestRegret:
    def test_perfect_ordering_zero_regret_everywhere(self):
        labels = np.array([1, 1, 0, 0])
        scores = np.array([4.0, 3.0, 2.0, 1.0])
        for spec in (AUC, NDCG, MAP, MRR, spec_p(2), spec_r(2)):
            assert rr.metric_regret(spec, labels, scores).regret_abs == 0.0

    def test_single_positive_displaced_auc(self):
        labels = np.array([1] + [0] * 10)
        scores = np.linspace(1.0, 0.0, 11)
        scores[1] = 2.0  # one negative overtakes the positive
        report = rr.metric_regret(AUC, labels, scores)
        assert report.regret_abs == pytest.approx(0.1, abs=1e-15)

    def test_single_positive_displaced_dcg_natural_log(self):
        labels = np.array([1] + [0] * 10)
        scores = np.linspace(1.0, 0.0, 11)
        scores[1] = 2.0
        regret = rr.dcg_regret(labels, scores, log_base=math.e)
        assert regret == pytest.approx(1 / math.log(2) - 1 / math.log(3), abs=1e-12)

    def test_report_forms(self):
        report = rr.RegretReport(value=0.5, ideal=0.8)
        assert report.regret_abs == pytest.approx(0.3)
        assert report.regret_rel == pytest.approx(1 - 0.5 / 0.8)

    def test_report_zero_ideal(self):
        report = rr.RegretReport(value=0.0, ideal=0.0)
        assert report.regret_rel == 0.0

    def test_report_rejects_value_above_ideal(self):
        with pytest.raises(ValueError):
            rr.RegretReport(value=0.9, ideal=0.5)


def _random_instance(rng):
    n = int(rng.integers(2, 11))
    labels = rng.integers(0, 2, n)
    if labels.sum() == 0:
        labels[int(rng.integers(n))] = 1
    scores = rng.normal(size=n)
    return labels, scores


class TestInvariants:
    def test_value_between_zero_and_ideal(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            labels, scores = _random_instance(rng)
            n = labels.size
            k = int(rng.integers(1, n + 1))
            specs = [NDCG, MAP, MRR, spec_p(k), spec_r(k)]
            if 0 < labels.sum() < n:
                specs.append(AUC)
            for spec in specs:
                report = rr.metric_regret(spec, labels, scores)
                assert 0.0 <= report.value <= report.ideal <= 1.0

    def test_auc_antisymmetry(self):
        rng = np.random.default_rng(12)
        for _ in range(200):
            labels, scores = _random_instance(rng)
            if labels.sum() in (0, labels.size):
                continue
            scores = np.unique(rng.normal(size=labels.size * 3))[: labels.size]
            rng.shuffle(scores)
            forward = rr.eval_metric(AUC, labels, rr.rank_by_scores(scores))
            backward = rr.eval_metric(AUC, labels, rr.rank_by_scores(-scores))
            assert forward + backward == pytest.approx(1.0, abs=1e-12)

    def test_truncation_at_n_matches_global(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            labels, scores = _random_instance(rng)
            n = labels.size
            perm = rr.rank_by_scores(scores)
            for kind in (MetricKind.NDCG, MetricKind.MAP, MetricKind.MRR):
                full = rr.eval_metric(MetricSpec(kind), labels, perm)
                at_n = rr.eval_metric(MetricSpec(kind, k=n), labels, perm)
                assert full == at_n

    @given(st.integers(1, 6), st.integers(0, 40))
    @settings(max_examples=60, deadline=None)
    def test_metric_values_depend_only_on_ranked_labels(self, n_pos, seed):
        rng = np.random.default_rng(seed)
        n = n_pos + int(rng.integers(1, 5))
        labels = np.zeros(n, dtype=int)
        labels[rng.choice(n, n_pos, replace=False)] = 1
        scores = rng.normal(size=n)
        perm = rr.rank_by_scores(scores)
        shifted = rr.rank_by_scores(scores * 2.5 + 1.0)
        for spec in (AUC, NDCG, MAP, MRR):
            if spec.kind is MetricKind.AUC and labels.sum() in (0, n):
                continue
            assert rr.eval_metric(spec, labels, perm) == rr.eval_metric(
                spec, labels, shifted
            )
