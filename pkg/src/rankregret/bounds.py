"""Closed-form regret-transfer coefficients and their witness instances.

A transfer coefficient ``C`` for a direction A -> B asserts
``regret_B <= C * regret_A`` over a family of predictors on instances
with fixed class counts. The coefficients here are exact functions of
the list length, the class counts, the discount weights
``w(r) = 1 / log_b(1 + r)``, and (for classification targets) the
margin ``delta = min_i |eta_i - 0.5|``.

Every coefficient is invariant under rescaling the discount weights,
hence under changing the log base. Brute-force verification of the
dominance and tightness claims lives in :mod:`rankregret.psi`; the
constructions returned by :func:`worst_case_construct` realize the
ratio ``C`` exactly where that is attainable (see each docstring).

Classification-side regrets use the ranking-coupled quotient: a
predictor is a permutation whose top ``n_pos`` items are predicted
positive, classification regret is the misclassified fraction, and the
ranking regrets are weighted by the conditional-probability gaps of a
two-level margin configuration (positives at ``0.5 + delta``, negatives
at ``0.5 - delta``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .metrics import MetricKind, MetricSpec, as_labels, discount_weights

__all__ = [
    "Direction",
    "WeightDifferentials",
    "TransferBound",
    "RateFit",
    "delta_extremes",
    "idcg_sum",
    "coeff_auc_to_ndcg",
    "coeff_ndcg_to_auc",
    "coeff_auc_to_acc",
    "coeff_ndcg_to_acc",
    "coeff_truncation",
    "worst_case_construct",
    "pointwise_failure_witness",
    "margin_eta",
    "split_accuracy_regret",
    "margin_auc_regret",
    "margin_ndcg_regret",
    "asymptotic_rate_scan",
]

E = math.e

# Canonical direction names. "auc_to_ndcg" transfers pairwise regret to
# listwise regret, and so on.
Direction = str
DIRECTIONS = ("auc_to_ndcg", "ndcg_to_auc", "auc_to_acc", "ndcg_to_acc")


@dataclass(frozen=True)
class WeightDifferentials:
    """Extreme consecutive gaps of the discount sequence on ranks 1..n."""

    delta_max: float  # w(1) - w(2)
    delta_min: float  # w(n-1) - w(n)
    n: int


@dataclass(frozen=True)
class TransferBound:
    """A direction, its coefficient, and the parameters that produced it.

    ``coefficient`` is ``None`` exactly when ``diverges`` is set: the
    direction admits no linear bound (already at zero source regret the
    target regret can be positive).
    """

    direction: str
    coefficient: float | None
    params: dict = field(default_factory=dict)
    diverges: bool = False

    def __post_init__(self) -> None:
        if self.diverges != (self.coefficient is None):
            raise ValueError("divergent bounds carry no coefficient and vice versa")
        if self.coefficient is not None and not self.coefficient > 0:
            raise ValueError("transfer coefficients must be positive")

    def psi(self, eps: float) -> float:
        """The linear envelope ``C * eps``."""
        if self.diverges:
            raise ValueError(f"direction {self.direction} diverges; no envelope")
        return self.coefficient * eps

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "coefficient": self.coefficient,
            "diverges": self.diverges,
            "params": dict(self.params),
        }


@dataclass(frozen=True)
class RateFit:
    """Least-squares growth diagnostics of a coefficient over an n grid."""

    scenario: str
    direction: str
    grid: tuple[int, ...]
    coefficients: tuple[float, ...]
    slope: float
    intercept: float
    growth_label: str
    ratio_spread: float  # max/min of C(n) / g(n) for the predicted g

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "direction": self.direction,
            "grid": list(self.grid),
            "coefficients": list(self.coefficients),
            "loglog_slope": self.slope,
            "loglog_intercept": self.intercept,
            "growth_label": self.growth_label,
            "ratio_spread": self.ratio_spread,
        }


def _gap(t: int, log_base: float) -> float:
    """Exact consecutive discount gap w(t) - w(t+1), in a stable form.

    Algebraically ``log_b((t+2)/(t+1)) / (log_b(1+t) * log_b(2+t))``;
    the log1p form keeps full precision when the two discounts agree to
    many digits (large t).
    """
    lb = math.log(log_base)
    return lb * math.log1p(1.0 / (1.0 + t)) / (math.log(1.0 + t) * math.log(2.0 + t))


def delta_extremes(n: int, log_base: float = E) -> WeightDifferentials:
    """Largest and smallest consecutive discount gaps for a list of n items.

    The gap sequence is strictly decreasing (the discount is convex), so
    the extremes sit at the ends: ``delta_max = w(1) - w(2)`` and
    ``delta_min = w(n-1) - w(n)``. Requires n >= 3 so the two gaps are
    distinct; both scale linearly under weight rescaling.
    """
    if n < 3:
        raise ValueError(f"need n >= 3 for distinct discount gaps, got {n}")
    return WeightDifferentials(
        delta_max=_gap(1, log_base), delta_min=_gap(n - 1, log_base), n=n
    )


def idcg_sum(n_pos: int, log_base: float = E) -> float:
    """Sum of the top n_pos discounts (the ideal unnormalized gain)."""
    if n_pos < 1:
        raise ValueError("need at least one positive")
    return float(discount_weights(n_pos, log_base).sum())


def coeff_auc_to_ndcg(
    n_pos: int, n_neg: int, log_base: float = E
) -> TransferBound:
    """Pairwise-to-listwise coefficient ``delta_max * n+ n- / sum_i w(i)``.

    The ratio is attained exactly by a single positive displaced from
    rank 1 to rank 2 (``n_pos == 1``); for larger n_pos every inversion
    path mixes smaller gaps and the bound is strict.
    """
    if n_pos < 1 or n_neg < 1:
        raise ValueError("class counts must both be positive")
    n = n_pos + n_neg
    d = delta_extremes(n, log_base)
    c = d.delta_max * n_pos * n_neg / idcg_sum(n_pos, log_base)
    return TransferBound(
        direction="auc_to_ndcg",
        coefficient=c,
        params={"n": n, "n_pos": n_pos, "n_neg": n_neg, "log_base": log_base},
    )


def coeff_ndcg_to_auc(
    n_pos: int, n_neg: int, log_base: float = E
) -> TransferBound:
    """Listwise-to-pairwise coefficient ``sum_i w(i) / (n+ n- delta_min)``.

    Attained exactly when the single inversion sits at the very bottom:
    ``n_pos == n - 1`` with the last positive displaced to rank n.
    """
    if n_pos < 1 or n_neg < 1:
        raise ValueError("class counts must both be positive")
    n = n_pos + n_neg
    d = delta_extremes(n, log_base)
    c = idcg_sum(n_pos, log_base) / (n_pos * n_neg * d.delta_min)
    return TransferBound(
        direction="ndcg_to_auc",
        coefficient=c,
        params={"n": n, "n_pos": n_pos, "n_neg": n_neg, "log_base": log_base},
    )


def coeff_auc_to_acc(n: int, n_pos: int, n_neg: int, delta: float) -> TransferBound:
    """Pairwise-to-classification coefficient ``n+ n- / (n delta)``.

    Attained exactly by one positive-negative swap across the class
    boundary under the margin-weighted pairwise regret.
    """
    if delta <= 0:
        raise ValueError("margin delta must be positive")
    if n_pos < 1 or n_neg < 1 or n_pos + n_neg != n:
        raise ValueError("class counts must be positive and sum to n")
    c = n_pos * n_neg / (n * delta)
    return TransferBound(
        direction="auc_to_acc",
        coefficient=c,
        params={"n": n, "n_pos": n_pos, "n_neg": n_neg, "delta": delta},
    )


def coeff_ndcg_to_acc(
    n: int, delta: float, log_base: float = E, n_pos: int = 1
) -> TransferBound:
    """Listwise-to-classification coefficient ``IDCG_n / (n delta w(n))``.

    Caution: exhaustive enumeration (see the psi module and tests) shows
    this envelope is not a universal dominance bound under the
    ranking-coupled quotient; a swap across the class boundary deep in
    the list can exceed it. It is exposed for its asymptotic behavior
    and reported alongside the measured worst-case ratio.
    """
    if delta <= 0:
        raise ValueError("margin delta must be positive")
    if n < 1 or not 1 <= n_pos < n:
        raise ValueError("need n >= 2 and 1 <= n_pos < n")
    w_n = float(discount_weights(n, log_base)[-1])
    c = idcg_sum(n_pos, log_base) / (n * delta * w_n)
    return TransferBound(
        direction="ndcg_to_acc",
        coefficient=c,
        params={"n": n, "n_pos": n_pos, "delta": delta, "log_base": log_base},
    )


def coeff_truncation(
    k1: int,
    k2: int,
    spec: MetricSpec,
    labels,
    direction: str = "down",
) -> TransferBound:
    """Transfer between truncation depths of one metric, deeper to shallower.

    For flat-window pointwise truncations the coefficient is ``k2 / k1``;
    for NDCG it is ``IDCG_k2 / IDCG_k1``. ``direction="down"`` means
    k2 -> k1 (the well-behaved way); ``direction="up"`` returns a
    divergence marker, since zero regret at depth k1 says nothing about
    ranks beyond k1.
    """
    y = as_labels(labels)
    if not 1 <= k1 < k2 <= y.size:
        raise ValueError(f"need 1 <= k1 < k2 <= n, got k1={k1}, k2={k2}, n={y.size}")
    if direction not in ("down", "up"):
        raise ValueError("direction must be 'down' or 'up'")
    name = f"trunc_{spec.kind.value}_k{k2}_to_k{k1}"
    params = {
        "k1": k1,
        "k2": k2,
        "kind": spec.kind.value,
        "n": int(y.size),
        "log_base": spec.log_base,
        "src_k": k2,
        "tgt_k": k1,
    }
    if direction == "up":
        params = dict(params, src_k=k1, tgt_k=k2)
        return TransferBound(
            direction=f"trunc_{spec.kind.value}_k{k1}_to_k{k2}",
            coefficient=None,
            params=params,
            diverges=True,
        )
    if spec.kind in (MetricKind.PRECISION_AT_K, MetricKind.RECALL_AT_K):
        c = k2 / k1
    elif spec.kind is MetricKind.NDCG:
        n_pos = int(y.sum())
        if n_pos < 1:
            raise ValueError("NDCG truncation transfer needs at least one positive")
        params["n_pos"] = n_pos
        c = ideal_gain_at(n_pos, k2, spec.log_base) / ideal_gain_at(
            n_pos, k1, spec.log_base
        )
    else:
        raise ValueError(f"no truncation coefficient for kind {spec.kind.value}")
    return TransferBound(direction=name, coefficient=c, params=params)


def ideal_gain_at(n_pos: int, k: int, log_base: float = E) -> float:
    """Ideal truncated gain: sum of the top ``min(k, n_pos)`` discounts."""
    return idcg_sum(min(k, n_pos), log_base)


def _ranked_to_instance(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels in item order plus a permutation realizing ranked labels z."""
    n = z.size
    n_pos = int(z.sum())
    labels = np.zeros(n, dtype=np.int64)
    labels[:n_pos] = 1
    pos_items = iter(range(n_pos))
    neg_items = iter(range(n_pos, n))
    perm = np.array(
        [next(pos_items) if zi else next(neg_items) for zi in z], dtype=np.int64
    )
    return labels, perm


def worst_case_construct(
    direction: str, n: int, n_pos: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Attainability instance for a transfer direction.

    Returns ``(labels, perm)`` with labels in item order and ``perm`` the
    predictor-induced ranking. Ranked labels per direction:

    * ``auc_to_ndcg``: the top positive displaced by one negative
      (default ``n_pos = 1``, where the ratio equals the coefficient
      exactly; larger n_pos yields a strict inequality).
    * ``ndcg_to_auc``: the last positive displaced to the bottom rank
      (default ``n_pos = n - 1``, the exact-tightness configuration).
    * ``auc_to_acc``: one positive-negative swap across the class
      boundary (exact for every admissible ``n_pos``).
    * ``ndcg_to_acc``: a positive sent from the class boundary to the
      bottom rank (the geometry that minimizes listwise loss per
      classification error; not exactly tight in general).
    """
    if n < 3:
        raise ValueError("need n >= 3")
    defaults = {
        "auc_to_ndcg": 1,
        "ndcg_to_auc": n - 1,
        "auc_to_acc": max(1, n // 2),
        "ndcg_to_acc": max(1, n // 2),
    }
    if direction not in defaults:
        raise ValueError(f"unknown direction {direction!r}")
    m = defaults[direction] if n_pos is None else n_pos
    if not 1 <= m < n:
        raise ValueError(f"need 1 <= n_pos < n, got n_pos={m}, n={n}")

    z = np.zeros(n, dtype=np.int64)
    z[:m] = 1
    if direction == "auc_to_ndcg":
        # Swap the rank-1 positive with the first negative.
        z[0], z[m] = 0, 1
    elif direction == "ndcg_to_auc":
        # Swap the last positive with the rank-n item.
        z[m - 1], z[n - 1] = 0, 1
    elif direction == "auc_to_acc":
        # Adjacent swap across the boundary between ranks m and m + 1.
        z[m - 1], z[m] = 0, 1
    elif direction == "ndcg_to_acc":
        # Boundary positive displaced all the way to the bottom.
        z[m - 1], z[n - 1] = 0, 1
    return _ranked_to_instance(z)


def pointwise_failure_witness(n: int) -> tuple[np.ndarray, np.ndarray]:
    """An (eta, scores) pair with zero classification regret yet positive
    expected ranking regret.

    Two confidently-positive items are ranked against their probability
    order while every score stays on the correct side of the threshold;
    remaining items sit safely below it in probability order.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    eta = np.full(n, 0.2)
    scores = np.full(n, 0.2)
    eta[0], eta[1] = 0.9, 0.6
    scores[0], scores[1] = 0.6, 0.8  # reversed order, both above threshold
    if n > 2:
        scores[2:] = np.linspace(0.2, 0.1, n - 2)  # keep remaining order strict
        eta[2:] = np.linspace(0.2, 0.1, n - 2)
    return eta, scores


def margin_eta(labels, delta: float) -> np.ndarray:
    """Two-level margin configuration: 0.5 + delta for positives, 0.5 - delta
    for negatives."""
    y = as_labels(labels)
    if not 0 < delta < 0.5:
        raise ValueError("delta must lie in (0, 0.5)")
    return np.where(y == 1, 0.5 + delta, 0.5 - delta)


def split_accuracy_regret(ranked: np.ndarray) -> float:
    """Misclassified fraction when the top n_pos ranks are predicted positive.

    This couples the classification threshold to the ranking: exactly as
    many items are predicted positive as there are positives.
    """
    z = np.asarray(ranked)
    n_pos = int(z.sum())
    errors = int((1 - z[:n_pos]).sum()) + int(z[n_pos:].sum())
    return errors / z.size


def _inversion_sum(ranked: np.ndarray) -> int:
    """Total displacement of positives from their ideal ranks."""
    pos_ranks = np.flatnonzero(np.asarray(ranked) == 1) + 1
    return int((pos_ranks - np.arange(1, pos_ranks.size + 1)).sum())


def margin_auc_regret(ranked: np.ndarray, delta: float) -> float:
    """Pairwise regret weighted by conditional-probability gaps.

    Each inverted positive-negative pair costs the probability gap
    ``2 delta`` instead of a flat 1, normalized by the pair count.
    """
    z = np.asarray(ranked)
    n_pos = int(z.sum())
    n_neg = z.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("need both classes present")
    return 2.0 * delta * _inversion_sum(z) / (n_pos * n_neg)


def margin_ndcg_regret(
    ranked: np.ndarray, delta: float, log_base: float = E
) -> float:
    """Listwise regret weighted by conditional-probability gaps.

    Equals ``2 delta`` times the label-weighted normalized discount loss
    for a two-level margin configuration.
    """
    z = np.asarray(ranked)
    n_pos = int(z.sum())
    if n_pos == 0:
        raise ValueError("need at least one positive")
    w = discount_weights(z.size, log_base)
    loss = float(w[:n_pos].sum() - w @ z)
    return 2.0 * delta * loss / idcg_sum(n_pos, log_base)


_GROWTH = {
    ("balanced", "auc_to_ndcg"): ("n*log(n)", lambda n: n * np.log(n)),
    ("balanced", "ndcg_to_auc"): ("log(n)", lambda n: np.log(n)),
    ("balanced", "auc_to_acc"): ("n", lambda n: n.astype(float)),
    ("balanced", "ndcg_to_acc"): ("1", lambda n: np.ones_like(n, dtype=float)),
    ("imbalanced", "auc_to_ndcg"): ("n", lambda n: n.astype(float)),
    ("imbalanced", "ndcg_to_auc"): ("log(n)^2", lambda n: np.log(n) ** 2),
    ("imbalanced", "auc_to_acc"): ("1", lambda n: np.ones_like(n, dtype=float)),
    ("imbalanced", "ndcg_to_acc"): ("log(n)/n", lambda n: np.log(n) / n),
}


def _coefficient_at(
    scenario: str, direction: str, n: int, delta: float, log_base: float
) -> float:
    n_pos = n // 2 if scenario == "balanced" else 1
    n_neg = n - n_pos
    if direction == "auc_to_ndcg":
        return coeff_auc_to_ndcg(n_pos, n_neg, log_base).coefficient
    if direction == "ndcg_to_auc":
        return coeff_ndcg_to_auc(n_pos, n_neg, log_base).coefficient
    if direction == "auc_to_acc":
        return coeff_auc_to_acc(n, n_pos, n_neg, delta).coefficient
    if direction == "ndcg_to_acc":
        return coeff_ndcg_to_acc(n, delta, log_base, n_pos).coefficient
    raise ValueError(f"unknown direction {direction!r}")


def asymptotic_rate_scan(
    scenario: str,
    direction: str,
    n_grid,
    delta: float = 0.25,
    log_base: float = E,
) -> RateFit:
    """Evaluate a coefficient over an n grid and fit its growth rate.

    ``scenario`` fixes the class balance: "balanced" uses
    ``n_pos = floor(n / 2)``, "imbalanced" uses ``n_pos = 1``. The fit is
    ordinary least squares of log C against log n; ``ratio_spread`` is
    the max/min of ``C(n) / g(n)`` for the scenario's predicted growth
    ``g``, so a bounded spread certifies the predicted rate on the grid.
    """
    grid = np.asarray(sorted(int(v) for v in n_grid), dtype=np.int64)
    if grid.size < 5:
        raise ValueError("rate scans need at least 5 grid points")
    if grid.min() < 10:
        raise ValueError("rate scans need n >= 10 at every grid point")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid points must be strictly increasing")
    if scenario not in ("balanced", "imbalanced"):
        raise ValueError(f"unknown scenario {scenario!r}")
    coeffs = np.array(
        [_coefficient_at(scenario, direction, int(n), delta, log_base) for n in grid]
    )
    slope, intercept = np.polyfit(np.log(grid), np.log(coeffs), 1)
    label, g = _GROWTH[(scenario, direction)]
    ratios = coeffs / g(grid)
    return RateFit(
        scenario=scenario,
        direction=direction,
        grid=tuple(int(v) for v in grid),
        coefficients=tuple(float(c) for c in coeffs),
        slope=float(slope),
        intercept=float(intercept),
        growth_label=label,
        ratio_spread=float(ratios.max() / ratios.min()),
    )
