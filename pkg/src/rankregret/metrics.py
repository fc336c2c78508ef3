"""Exact evaluation of binary-relevance ranking and classification metrics.

All metrics operate on a list of items with binary labels. Rank-based
metrics (precision/recall at k, AUC, NDCG, MAP, MRR) are functions of the
permutation a score vector induces; accuracy is a function of the scores
and a decision threshold. Every evaluator is exact on finite instances,
and each metric has an ideal value (the best attainable over orderings,
respectively classifications) so that absolute and relative regret are
well defined.

Conventions:

* Permutations are 0-based index arrays; ``perm[i]`` is the item placed
  at rank ``i + 1``.
* Score ties are broken deterministically by ascending original index,
  so AUC never awards fractional tie credit.
* Position discounts are ``w(r) = 1 / log_b(1 + r)`` with configurable
  base ``b``; metric values of the NDCG family are invariant to ``b``
  only through normalization, so the base is part of the metric spec.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import UndefinedMetricError

__all__ = [
    "MetricGroup",
    "MetricKind",
    "MetricSpec",
    "RegretReport",
    "as_labels",
    "as_scores",
    "as_eta",
    "as_permutation",
    "discount_weights",
    "rank_by_scores",
    "eval_metric",
    "eval_accuracy",
    "accuracy_at_split",
    "ideal_value",
    "dcg_value",
    "ideal_dcg",
    "dcg_regret",
    "metric_regret",
]


class MetricGroup(enum.Enum):
    """Structural family of a metric, by its unit of evaluation."""

    POINTWISE = "pointwise"
    PAIRWISE = "pairwise"
    LISTWISE = "listwise"


class MetricKind(enum.Enum):
    ACC = "acc"
    PRECISION_AT_K = "precision_at_k"
    RECALL_AT_K = "recall_at_k"
    AUC = "auc"
    NDCG = "ndcg"
    MAP = "map"
    MRR = "mrr"


_KIND_GROUP = {
    MetricKind.ACC: MetricGroup.POINTWISE,
    MetricKind.PRECISION_AT_K: MetricGroup.POINTWISE,
    MetricKind.RECALL_AT_K: MetricGroup.POINTWISE,
    MetricKind.AUC: MetricGroup.PAIRWISE,
    MetricKind.NDCG: MetricGroup.LISTWISE,
    MetricKind.MAP: MetricGroup.LISTWISE,
    MetricKind.MRR: MetricGroup.LISTWISE,
}

_NEEDS_K = {MetricKind.PRECISION_AT_K, MetricKind.RECALL_AT_K}


@dataclass(frozen=True)
class MetricSpec:
    """Identity of a metric: kind, optional truncation depth, weighting.

    Attributes:
        kind: Which metric to evaluate.
        k: Truncation depth (``None`` evaluates the full list). Required
            for precision/recall at k; optional for NDCG/MAP/MRR.
        log_base: Base of the logarithmic position discount used by the
            DCG family. Must exceed 1.
        tau: Decision threshold for accuracy, in (0, 1).
    """

    kind: MetricKind
    k: int | None = None
    log_base: float = 2.0
    tau: float = 0.5

    def __post_init__(self) -> None:
        if self.k is not None and self.k < 1:
            raise ValueError(f"truncation depth must be >= 1, got {self.k}")
        if self.kind in _NEEDS_K and self.k is None:
            raise ValueError(f"{self.kind.value} requires a truncation depth k")
        if not self.log_base > 1.0:
            raise ValueError(f"log base must exceed 1, got {self.log_base}")
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.tau}")

    @property
    def group(self) -> MetricGroup:
        return _KIND_GROUP[self.kind]

    def label(self) -> str:
        """Human-readable name, e.g. ``ndcg@10``."""
        base = self.kind.value
        return f"{base}@{self.k}" if self.k is not None else base


@dataclass(frozen=True)
class RegretReport:
    """Metric value, its ideal, and both regret forms.

    ``regret_abs = ideal - value`` and ``regret_rel = 1 - value / ideal``
    (defined as 0 when the ideal is 0).
    """

    value: float
    ideal: float
    regret_abs: float = field(init=False)
    regret_rel: float = field(init=False)

    def __post_init__(self) -> None:
        if not -1e-12 <= self.value <= self.ideal + 1e-12:
            raise ValueError(
                f"metric value {self.value} outside [0, ideal={self.ideal}]"
            )
        object.__setattr__(self, "regret_abs", max(self.ideal - self.value, 0.0))
        rel = 0.0 if self.ideal == 0.0 else max(1.0 - self.value / self.ideal, 0.0)
        object.__setattr__(self, "regret_rel", rel)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "ideal": self.ideal,
            "regret_abs": self.regret_abs,
            "regret_rel": self.regret_rel,
        }


def as_labels(labels) -> np.ndarray:
    """Validate and return a binary label vector as an int array."""
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("labels must be a non-empty 1-d vector")
    out = arr.astype(np.int64)
    if not np.array_equal(out, arr) or not np.isin(out, (0, 1)).all():
        raise ValueError("labels must contain only 0 and 1")
    return out


def as_scores(scores) -> np.ndarray:
    """Validate and return a finite score vector as a float array."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("scores must be a non-empty 1-d vector")
    if not np.isfinite(arr).all():
        raise ValueError("scores must be finite")
    return arr


def as_eta(eta) -> np.ndarray:
    """Validate and return a conditional-probability vector in [0, 1]."""
    arr = np.asarray(eta, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("eta must be a non-empty 1-d vector")
    if not np.isfinite(arr).all() or arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("eta entries must lie in [0, 1]")
    return arr


def as_permutation(perm, n: int) -> np.ndarray:
    """Validate that ``perm`` is a bijection on ``range(n)``."""
    arr = np.asarray(perm, dtype=np.int64)
    if arr.shape != (n,) or not np.array_equal(np.sort(arr), np.arange(n)):
        raise ValueError(f"permutation must be a bijection on 0..{n - 1}")
    return arr


def discount_weights(n: int, log_base: float = 2.0) -> np.ndarray:
    """Position discounts ``w(r) = 1 / log_b(1 + r)`` for ranks 1..n."""
    if n < 1:
        raise ValueError("need at least one rank")
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return math.log(log_base) / np.log1p(ranks)


def rank_by_scores(scores) -> np.ndarray:
    """Permutation sorting scores in non-increasing order.

    Ties are broken by ascending original index (stable), so the result
    is deterministic and invariant under strictly increasing transforms
    of the scores.
    """
    arr = as_scores(scores)
    return np.argsort(-arr, kind="stable")


def ranked_labels(labels, perm) -> np.ndarray:
    y = as_labels(labels)
    sigma = as_permutation(perm, y.size)
    return y[sigma]


def _check_k(k: int | None, n: int) -> int:
    if k is None:
        return n
    if k > n:
        raise ValueError(f"truncation depth k={k} exceeds list length n={n}")
    return k


def eval_ranked(spec: MetricSpec, z: np.ndarray) -> float:
    """Evaluate a rank-based metric on an already-ranked label vector.

    ``z[i]`` is the label of the item at rank ``i + 1``. This is the
    single source of truth for all rank-based evaluators; ``eval_metric``
    merely applies the permutation first.
    """
    n = z.size
    n_pos = int(z.sum())
    kind = spec.kind
    if kind is MetricKind.ACC:
        raise ValueError("accuracy is score-based; use eval_accuracy")
    k = _check_k(spec.k, n)

    if kind is MetricKind.PRECISION_AT_K:
        return float(z[:k].sum() / k)
    if kind is MetricKind.RECALL_AT_K:
        if n_pos == 0:
            warnings.warn("recall undefined without positives; returning 0")
            return 0.0
        return float(z[:k].sum() / n_pos)
    if kind is MetricKind.AUC:
        n_neg = n - n_pos
        if n_pos == 0 or n_neg == 0:
            raise UndefinedMetricError(
                f"AUC undefined with n_pos={n_pos}, n_neg={n_neg}"
            )
        # Negatives strictly below each positive; pair count is exact
        # because the ranking is a total order.
        neg_below = np.cumsum((1 - z)[::-1])[::-1] - (1 - z)
        correct = int(neg_below[z == 1].sum())
        return correct / (n_pos * n_neg)
    if kind is MetricKind.NDCG:
        if n_pos == 0:
            warnings.warn("NDCG undefined without positives; returning 0")
            return 0.0
        w = discount_weights(n, spec.log_base)
        dcg = float(w[:k] @ z[:k])
        idcg = float(w[: min(k, n_pos)].sum())
        return dcg / idcg
    if kind is MetricKind.MAP:
        if n_pos == 0:
            warnings.warn("MAP undefined without positives; returning 0")
            return 0.0
        hits = np.cumsum(z[:k])
        prec = hits / np.arange(1, k + 1)
        ap = float(prec[z[:k] == 1].sum())
        return ap / min(k, n_pos)
    if kind is MetricKind.MRR:
        if n_pos == 0:
            warnings.warn("MRR undefined without positives; returning 0")
            return 0.0
        first = np.flatnonzero(z[:k] == 1)
        return 0.0 if first.size == 0 else 1.0 / (int(first[0]) + 1)
    raise AssertionError(f"unhandled kind {kind}")


def eval_metric(spec: MetricSpec, labels, perm) -> float:
    """Value of a rank-based metric for the given labels and permutation."""
    return eval_ranked(spec, ranked_labels(labels, perm))


def eval_accuracy(labels, scores, tau: float = 0.5) -> float:
    """Fraction of items whose thresholded score matches the label.

    An item is predicted positive iff its score strictly exceeds ``tau``.
    """
    y = as_labels(labels)
    s = as_scores(scores)
    if s.size != y.size:
        raise ValueError("labels and scores must have equal length")
    pred = (s > tau).astype(np.int64)
    return float((pred == y).mean())


def accuracy_at_split(labels, perm, split: int) -> float:
    """Accuracy of predicting the top ``split`` ranked items positive.

    This is the quotient form of accuracy for predictors identified with
    a permutation plus a threshold position in 0..n.
    """
    z = ranked_labels(labels, perm)
    n = z.size
    if not 0 <= split <= n:
        raise ValueError(f"split must lie in 0..{n}")
    errors = int((1 - z[:split]).sum()) + int(z[split:].sum())
    return 1.0 - errors / n


def ideal_value(spec: MetricSpec, labels) -> float:
    """Metric value under the label-sorted permutation (positives first).

    Equals 1 for every normalized metric admissible on the instance;
    precision at k with fewer than k positives tops out at
    ``min(k, n_pos) / k``, recall at k at ``min(k, n_pos) / n_pos``.
    Accuracy's ideal is 1 (labels are always perfectly separable by some
    score vector).
    """
    y = as_labels(labels)
    if spec.kind is MetricKind.ACC:
        return 1.0
    ideal_perm = np.argsort(-y, kind="stable")
    return eval_ranked(spec, y[ideal_perm])


def dcg_value(labels, perm, k: int | None = None, log_base: float = 2.0) -> float:
    """Unnormalized discounted cumulative gain of a ranking."""
    z = ranked_labels(labels, perm)
    kk = _check_k(k, z.size)
    w = discount_weights(z.size, log_base)
    return float(w[:kk] @ z[:kk])


def ideal_dcg(n_pos: int, k: int | None = None, log_base: float = 2.0) -> float:
    """Ideal DCG: the discount sum over the top ``min(k, n_pos)`` ranks."""
    if n_pos < 0:
        raise ValueError("n_pos must be non-negative")
    if n_pos == 0:
        return 0.0
    m = n_pos if k is None else min(k, n_pos)
    return float(discount_weights(m, log_base).sum())


def dcg_regret(
    labels, scores, k: int | None = None, log_base: float = 2.0
) -> float:
    """Ideal DCG minus achieved DCG for the score-induced ranking."""
    y = as_labels(labels)
    perm = rank_by_scores(scores)
    return ideal_dcg(int(y.sum()), k, log_base) - dcg_value(y, perm, k, log_base)


def metric_regret(spec: MetricSpec, labels, scores) -> RegretReport:
    """Evaluate a metric on score-ranked labels and report both regrets."""
    y = as_labels(labels)
    s = as_scores(scores)
    if s.size != y.size:
        raise ValueError("labels and scores must have equal length")
    if spec.kind is MetricKind.ACC:
        value = eval_accuracy(y, s, spec.tau)
    else:
        value = eval_metric(spec, y, rank_by_scores(s))
    return RegretReport(value=value, ideal=ideal_value(spec, y))
