"""Tests for brute-force transfer curves and bound verification."""

import math

import numpy as np
import pytest

import rankregret as rr
from rankregret import MetricKind, MetricSpec
from rankregret.errors import CapacityError
from rankregret.psi import ranked_arrangements, arrangement_to_perm, realized_regret

AUC = MetricSpec(MetricKind.AUC)
NDCG = MetricSpec(MetricKind.NDCG)
NDCG_E = MetricSpec(MetricKind.NDCG, log_base=math.e)
ACC = MetricSpec(MetricKind.ACC)
LABELS = np.array([1, 1, 0, 0, 0])


class TestEnumeration:
    def test_arrangement_count(self):
        assert ranked_arrangements(5, 2).shape == (10, 5)

    def test_arrangement_to_perm_consistent(self):
        labels = np.array([0, 1, 1, 0])
        for z in ranked_arrangements(4, 2):
            perm = arrangement_to_perm(labels, z)
            assert labels[perm].tolist() == z.tolist()

    def test_capacity(self):
        with pytest.raises(CapacityError):
            rr.psi_brute(NDCG, AUC, np.array([1] * 5 + [0] * 5))


class TestPsiCurve:
    def test_unconstrained_sup_at_max_eps(self):
        curve = rr.psi_brute(AUC, NDCG, LABELS)
        max_target = max(
            realized_regret(NDCG, LABELS, z) for z in ranked_arrangements(5, 2)
        )
        assert curve.points[-1][1] == pytest.approx(max_target)

    def test_self_transfer_bounded_by_eps(self):
        curve = rr.psi_brute(NDCG, NDCG, LABELS)
        for eps, value in curve.points:
            assert value <= eps + 1e-12

    def test_monotone_in_eps(self):
        for source, target in ((AUC, NDCG), (NDCG, AUC), (ACC, AUC)):
            curve = rr.psi_brute(source, target, LABELS)
            values = [v for _, v in curve.points]
            assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))

    def test_custom_grid(self):
        curve = rr.psi_brute(AUC, NDCG, LABELS, eps_grid=[0.0, 0.5, 1.0])
        assert [e for e, _ in curve.points] == [0.0, 0.5, 1.0]

    def test_completely_uniform_labels_zero_curve(self):
        labels = np.array([1, 1, 1])
        curve = rr.psi_brute(NDCG, MetricSpec(MetricKind.MRR), labels)
        assert all(v == 0.0 for _, v in curve.points)

    def test_zero_source_set_matches_optimal_arrangements(self):
        # Zero listwise regret happens exactly on the label-sorted pattern.
        for z in ranked_arrangements(5, 2):
            regret = realized_regret(NDCG, LABELS, z)
            sorted_pattern = z.tolist() == sorted(z.tolist(), reverse=True)
            assert (regret < 1e-12) == sorted_pattern


class TestBinaryVersusExpectedBlindness:
    def test_realized_classification_transfer_collapses(self):
        # Binarized labels make same-class items exchangeable: zero
        # classification regret then forces a perfect separation.
        curve = rr.psi_brute(ACC, AUC, LABELS)
        assert curve(0.0) == 0.0

    def test_expected_classification_transfer_positive_at_zero(self):
        curve = rr.psi_brute_expected(ACC, AUC, [0.9, 0.6, 0.2])
        assert curve(0.0) > 0.0
        assert curve.mode == "expected"

    def test_expected_equal_probabilities_collapse(self):
        curve = rr.psi_brute_expected(ACC, AUC, [0.8, 0.8, 0.2])
        assert curve(0.0) == pytest.approx(0.0, abs=1e-12)

    def test_accuracy_self_transfer_shares_threshold(self):
        # The threshold is part of the predictor, so the accuracy
        # self-curve must stay on the diagonal in both semantics.
        curve = rr.psi_brute(ACC, ACC, LABELS)
        assert all(v <= e + 1e-12 for e, v in curve.points)
        curve = rr.psi_brute_expected(ACC, ACC, [0.9, 0.6, 0.2])
        assert all(v <= e + 1e-12 for e, v in curve.points)


class TestVerifyBound:
    def test_pairwise_listwise_dominance_n6(self):
        labels = np.array([1, 1, 1, 0, 0, 0])
        bound = rr.coeff_auc_to_ndcg(3, 3)
        report = rr.verify_bound(bound, labels)
        assert report.dominance_holds
        # The exact-tightness geometry needs a single positive; on this
        # multiset the worst ratio stays strictly inside the envelope.
        assert report.tightness_ratio < bound.coefficient

    def test_tightness_attained_on_single_positive(self):
        labels = np.array([1, 0, 0, 0, 0, 0])
        bound = rr.coeff_auc_to_ndcg(1, 5)
        report = rr.verify_bound(bound, labels)
        assert report.dominance_holds
        assert report.tightness_ratio == pytest.approx(bound.coefficient, abs=1e-9)
        assert report.witness == (0, 1, 0, 0, 0, 0)

    def test_truncation_down_dominates_inside_positives(self):
        labels = np.array([1, 1, 1, 0, 0, 0])
        spec = MetricSpec(MetricKind.PRECISION_AT_K, k=2)
        bound = rr.coeff_truncation(2, 3, spec, labels)
        report = rr.verify_bound(bound, labels)
        assert report.dominance_holds

    def test_truncation_down_fails_beyond_positives(self):
        labels = np.array([1, 0, 0, 0, 0, 0])
        spec = MetricSpec(MetricKind.PRECISION_AT_K, k=1)
        bound = rr.coeff_truncation(1, 2, spec, labels)
        report = rr.verify_bound(bound, labels)
        assert not report.dominance_holds
        assert report.max_violation > 0.5  # positive at rank 2: deep regret at k=1

    def test_reverse_truncation_divergence(self):
        labels = np.array([1, 1, 0, 0, 0, 0])
        spec = MetricSpec(MetricKind.PRECISION_AT_K, k=1)
        marker = rr.coeff_truncation(1, 2, spec, labels, direction="up")
        report = rr.verify_bound(marker, labels)
        assert marker.diverges
        assert report.zero_source_target_sup > 0.0

    def test_report_serializes(self):
        bound = rr.coeff_auc_to_ndcg(2, 3)
        report = rr.verify_bound(bound, np.array([1, 1, 0, 0, 0]))
        data = report.to_dict()
        assert data["dominance_holds"] is True
        assert data["n"] == 5 and data["n_pos"] == 2
