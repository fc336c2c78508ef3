"""Tests for the regret-trajectory simulation."""

import math

import numpy as np
import pytest

import rankregret as rr
from rankregret.simulate import (
    LOSS_KINDS,
    write_scatter_svg,
    write_snapshots_csv,
    write_summary_json,
)


def _soft_regrets_reference(eta, scores, tau=0.5):
    """Independent loop implementation of the expected-metric regrets."""
    n = len(eta)
    acc = sum(e if s > tau else 1 - e for e, s in zip(eta, scores)) / n
    acc_star = sum(max(e, 1 - e) for e in eta) / n
    order = sorted(range(n), key=lambda i: (-scores[i], i))
    ranked = [eta[i] for i in order]
    ideal = sorted(eta, reverse=True)

    def pair_mass(vals):
        return sum(
            vals[i] * (1 - vals[j]) for i in range(n) for j in range(i + 1, n)
        )

    def gain(vals):
        return sum(v / math.log2(r + 2) for r, v in enumerate(vals))

    return (
        1 - acc / acc_star,
        1 - pair_mass(ranked) / pair_mass(ideal),
        1 - gain(ranked) / gain(ideal),
    )


class TestGenEta:
    def test_range(self):
        eta = rr.gen_eta(5000, 1)
        assert eta.min() >= 0.01 and eta.max() <= 0.99

    def test_deterministic(self):
        assert np.array_equal(rr.gen_eta(100, 7), rr.gen_eta(100, 7))

    def test_seeds_differ(self):
        draws = {tuple(np.round(rr.gen_eta(20, s), 12)) for s in range(100)}
        assert len(draws) == 100


class TestErrorModels:
    def test_alpha_one_returns_eta_exactly(self):
        eta = rr.gen_eta(50, 3)
        for kind in LOSS_KINDS:
            assert np.array_equal(rr.apply_error_model(eta, kind, 1.0, 9), eta)

    def test_pointwise_never_crosses_boundary(self):
        eta = rr.gen_eta(500, 4)
        for alpha in (0.0, 0.3, 0.7):
            scores = rr.apply_error_model(eta, "pointwise", alpha, 11)
            assert np.all((scores > 0.5) == (eta > 0.5))

    def test_pointwise_scrambles_within_class(self):
        eta = rr.gen_eta(500, 4)
        scores = rr.apply_error_model(eta, "pointwise", 0.0, 11)
        assert rr.rank_by_scores(scores).tolist() != rr.rank_by_scores(eta).tolist()

    def test_pairwise_swap_count_shrinks_with_alpha(self):
        eta = rr.gen_eta(200, 5)
        drift = []
        for alpha in (0.0, 0.5, 0.9):
            scores = rr.apply_error_model(eta, "pairwise", alpha, 12, noise_scale=0.0)
            ideal = rr.rank_by_scores(eta)
            drift.append(int((rr.rank_by_scores(scores) != ideal).sum()))
        assert drift[0] >= drift[1] >= drift[2]

    def test_listwise_noise_damped_down_the_list(self):
        eta = np.linspace(0.99, 0.01, 400)
        reps = [
            rr.apply_error_model(eta, "listwise", 0.0, seed) - eta
            for seed in range(60)
        ]
        noise = np.std(reps, axis=0)
        assert noise[0] > 2 * noise[-1]

    def test_invalid_inputs(self):
        eta = rr.gen_eta(10, 0)
        with pytest.raises(ValueError):
            rr.apply_error_model(eta, "pointwise", 1.5, 0)
        with pytest.raises(ValueError):
            rr.apply_error_model(eta, "sideways", 0.5, 0)


class TestSnapshotRegrets:
    def test_exact_zero_at_truth(self):
        eta = rr.gen_eta(300, 8)
        snap = rr.snapshot_regrets(eta, eta.copy())
        assert (snap.r_acc, snap.r_auc, snap.r_ndcg) == (0.0, 0.0, 0.0)

    def test_matches_loop_reference(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            n = int(rng.integers(3, 12))
            eta = rng.uniform(0.01, 0.99, n)
            scores = rng.normal(0.5, 0.4, n)
            snap = rr.snapshot_regrets(eta, scores)
            want = _soft_regrets_reference(eta.tolist(), scores.tolist())
            assert snap.r_acc == pytest.approx(want[0], abs=1e-12)
            assert snap.r_auc == pytest.approx(want[1], abs=1e-12)
            assert snap.r_ndcg == pytest.approx(want[2], abs=1e-12)

    def test_reversed_scores_hand_instance(self):
        eta = [0.9, 0.8, 0.2, 0.1]
        scores = [0.1, 0.2, 0.8, 0.9]
        snap = rr.snapshot_regrets(eta, scores)
        want = _soft_regrets_reference(eta, scores)
        assert snap.r_acc == pytest.approx(want[0], rel=1e-12)
        assert snap.r_auc == pytest.approx(want[1], rel=1e-12)
        assert snap.r_ndcg == pytest.approx(want[2], rel=1e-12)
        # Fully reversed list: substantial regret on every axis.
        assert snap.r_acc > 0.8 and snap.r_auc > 0.9 and snap.r_ndcg > 0.3

    def test_one_class_flagged(self):
        snap = rr.snapshot_regrets([0.8, 0.9], [0.9, 0.8])
        assert snap.auc_undefined and math.isnan(snap.r_auc)

    def test_top_swap_hits_listwise_far_harder_than_pairwise(self):
        # Swapping the top two of a 1000-item list barely moves the
        # pairwise regret but is clearly visible on the listwise axis.
        eta = rr.gen_eta(1000, 7)
        scores = eta.copy()
        order = rr.rank_by_scores(scores)
        scores[order[0]], scores[order[1]] = scores[order[1]], scores[order[0]]
        snap = rr.snapshot_regrets(eta, scores)
        assert snap.r_auc > 0.0
        assert snap.r_ndcg > 100 * snap.r_auc


class TestRunSimulation:
    CONFIG = rr.SimConfig(n=300, snapshots=60, seed=5)

    def test_row_count_and_determinism(self):
        a = rr.run_simulation(self.CONFIG)
        b = rr.run_simulation(self.CONFIG)
        assert len(a.snapshots) == 3 * 60
        assert a.snapshots == b.snapshots
        assert a.summary == b.summary

    def test_seed_changes_output(self):
        other = rr.run_simulation(rr.SimConfig(n=300, snapshots=60, seed=6))
        assert other.snapshots != rr.run_simulation(self.CONFIG).snapshots

    def test_endpoint_convergence(self):
        result = rr.run_simulation(self.CONFIG)
        finals = [s for s in result.snapshots if s.alpha == 1.0]
        assert len(finals) == 3
        assert all((s.r_acc, s.r_auc, s.r_ndcg) == (0, 0, 0) for s in finals)

    def test_pointwise_blindness(self):
        result = rr.run_simulation(self.CONFIG)
        pw = [s for s in result.snapshots if s.loss == "pointwise"]
        assert all(s.r_acc == 0.0 for s in pw)
        assert all(s.r_auc > 0.0 for s in pw if s.alpha < 1.0)

    def test_binned_means_non_increasing(self):
        result = rr.run_simulation(rr.SimConfig(n=500, snapshots=200, seed=2))
        for loss in LOSS_KINDS:
            snaps = sorted(
                (s for s in result.snapshots if s.loss == loss),
                key=lambda s: s.alpha,
            )
            for field in ("r_acc", "r_auc", "r_ndcg"):
                values = np.array([getattr(s, field) for s in snaps])
                bins = values.reshape(4, -1).mean(axis=1)
                assert np.all(np.diff(bins) <= 1e-12), (loss, field, bins)

    def test_alpha_random_mode(self):
        cfg = rr.SimConfig(n=100, snapshots=40, seed=1, alpha_mode="random")
        result = rr.run_simulation(cfg)
        alphas = [s.alpha for s in result.snapshots if s.loss == "pointwise"]
        assert alphas == sorted(alphas)
        assert len(set(alphas)) > 30

    def test_config_validation(self):
        with pytest.raises(ValueError):
            rr.SimConfig(snapshots=0)
        with pytest.raises(ValueError):
            rr.SimConfig(losses=("pointwise", "bogus"))


class TestWriters:
    def test_artifacts(self, tmp_path):
        result = rr.run_simulation(rr.SimConfig(n=50, snapshots=10, seed=0))
        csv_path = tmp_path / "snapshots.csv"
        json_path = tmp_path / "summary.json"
        svg_path = tmp_path / "scatter.svg"
        write_snapshots_csv(csv_path, result)
        write_summary_json(json_path, result)
        write_scatter_svg(svg_path, result)
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "loss,alpha,r_acc,r_auc,r_ndcg"
        assert len(lines) == 1 + 30
        import json

        summary = json.loads(json_path.read_text())
        assert summary["config"]["seed"] == 0
        assert set(summary["per_loss"]) == set(LOSS_KINDS)
        svg = svg_path.read_text()
        assert svg.startswith("<svg") and "circle" in svg
