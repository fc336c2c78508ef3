"""Exact Bayes-optimal sets and expected utilities on small instances.

Items carry conditional relevance probabilities ``eta`` and labels are
Bernoulli(eta), independent across items. Scoring functions are
quotiented to permutations: every rank-based metric depends on scores
only through the induced ordering. Accuracy additionally depends on a
decision threshold, so its quotient pairs a permutation with one of the
n + 1 threshold positions; its per-permutation utility is the best over
those splits.

Expected utilities come from two routes:

* ``gadd_linear``: metrics whose expectation is linear in ``eta`` with
  fixed position weights (DCG, precision at k, and the recall-at-k
  numerator, whose 1/n_pos normalizer is a per-instance constant that
  cannot change an argmax).
* ``exact_enumeration``: all 2**n label realizations, weighted by their
  Bernoulli probabilities. Realizations on which a metric is undefined
  (AUC with one class, positive-free lists for NDCG/MAP/MRR) contribute
  0; the convention is permutation-independent, so optimal sets are
  unaffected by it.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, MarginError
from .metrics import (
    MetricKind,
    MetricSpec,
    as_eta,
    as_permutation,
    as_scores,
    discount_weights,
    eval_ranked,
)

__all__ = [
    "MAX_ENUMERATION_ITEMS",
    "MAX_FACTORIAL_ITEMS",
    "ExpectedUtility",
    "OptimalSet",
    "SubsumptionResult",
    "expected_dcg",
    "expected_utility",
    "utilities_for_perms",
    "bayes_optimal_set",
    "is_order_preserving",
    "is_sign_consistent",
    "check_subsumption",
]

MAX_ENUMERATION_ITEMS = 14
MAX_FACTORIAL_ITEMS = 8

_LINEAR_KINDS = {MetricKind.PRECISION_AT_K, MetricKind.RECALL_AT_K}
_ENUM_KINDS = {MetricKind.AUC, MetricKind.NDCG, MetricKind.MAP, MetricKind.MRR}


@dataclass(frozen=True)
class ExpectedUtility:
    """Expected metric utility of one permutation under Bernoulli labels."""

    value: float
    spec: MetricSpec
    method: str  # "gadd_linear" | "exact_enumeration" | "split_max"


@dataclass(frozen=True)
class OptimalSet:
    """All permutations attaining the maximum expected utility."""

    permutations: frozenset[tuple[int, ...]]
    max_utility: float
    tolerance: float

    def __contains__(self, perm) -> bool:
        return tuple(int(i) for i in perm) in self.permutations

    def __le__(self, other: "OptimalSet") -> bool:
        return self.permutations <= other.permutations


@dataclass(frozen=True)
class SubsumptionResult:
    """Whether one optimal set is contained in another, with a witness."""

    holds: bool
    witness: tuple[int, ...] | None


@functools.lru_cache(maxsize=32)
def _label_patterns(n: int) -> np.ndarray:
    """All 2**n binary label vectors, one per row, bit i = item/rank i."""
    idx = np.arange(2**n, dtype=np.int64)
    return (idx[:, None] >> np.arange(n)) & 1


def _pattern_probs(eta: np.ndarray, patterns: np.ndarray) -> np.ndarray:
    return np.prod(np.where(patterns == 1, eta, 1.0 - eta), axis=1)


@functools.lru_cache(maxsize=256)
def _metric_table(spec: MetricSpec, n: int) -> np.ndarray:
    """Metric value for every ranked-label pattern of length n.

    Degenerate patterns take the fixed value 0 (see module docstring).
    """
    table = np.empty(2**n, dtype=np.float64)
    patterns = _label_patterns(n)
    for idx in range(2**n):
        z = patterns[idx]
        n_pos = int(z.sum())
        if spec.kind is MetricKind.AUC and (n_pos == 0 or n_pos == n):
            table[idx] = 0.0
        elif n_pos == 0:
            table[idx] = 0.0
        else:
            table[idx] = eval_ranked(spec, z)
    return table


def _linear_weights(spec: MetricSpec, n: int) -> np.ndarray:
    k = spec.k if spec.k is not None else n
    if k > n:
        raise ValueError(f"truncation depth k={k} exceeds list length n={n}")
    w = np.zeros(n, dtype=np.float64)
    if spec.kind is MetricKind.PRECISION_AT_K:
        w[:k] = 1.0 / k
    elif spec.kind is MetricKind.RECALL_AT_K:
        w[:k] = 1.0  # numerator only; 1/n_pos is an instance constant
    else:
        raise AssertionError(spec.kind)
    return w


def expected_dcg(
    eta, perm, log_base: float = 2.0, k: int | None = None
) -> float:
    """Expected unnormalized DCG: linear in eta with fixed discounts."""
    e = as_eta(eta)
    sigma = as_permutation(perm, e.size)
    kk = e.size if k is None else k
    if kk > e.size:
        raise ValueError("truncation exceeds list length")
    w = discount_weights(e.size, log_base)
    return float(w[:kk] @ e[sigma][:kk])


def _split_max_utilities(eta: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """Best expected accuracy over all n + 1 threshold splits, per permutation."""
    ranked = eta[perms]  # (B, n)
    n = ranked.shape[1]
    base = (1.0 - ranked).sum(axis=1)
    gains = np.cumsum(2.0 * ranked - 1.0, axis=1)
    best_gain = np.maximum(gains.max(axis=1), 0.0)
    return (base + best_gain) / n


def utilities_for_perms(spec: MetricSpec, eta, perms) -> np.ndarray:
    """Expected utility of each permutation in a (B, n) array of perms."""
    e = as_eta(eta)
    p = np.asarray(perms, dtype=np.int64)
    if p.ndim != 2 or p.shape[1] != e.size:
        raise ValueError("perms must be a (B, n) array")
    if spec.kind is MetricKind.ACC:
        return _split_max_utilities(e, p)
    if spec.kind in _LINEAR_KINDS:
        return e[p] @ _linear_weights(spec, e.size)
    n = e.size
    if n > MAX_ENUMERATION_ITEMS:
        raise CapacityError(
            f"exact enumeration limited to n <= {MAX_ENUMERATION_ITEMS}, got {n}"
        )
    patterns = _label_patterns(n)
    probs = _pattern_probs(e, patterns)
    table = _metric_table(spec, n)
    pow2 = (1 << np.arange(n)).astype(np.int64)
    out = np.empty(p.shape[0], dtype=np.float64)
    chunk = max(1, 2_000_000 // (2**n))
    for lo in range(0, p.shape[0], chunk):
        block = p[lo : lo + chunk]
        ranked_idx = patterns[:, block].transpose(1, 0, 2) @ pow2  # (B, 2^n)
        out[lo : lo + block.shape[0]] = table[ranked_idx] @ probs
    return out


def expected_utility(spec: MetricSpec, eta, perm) -> ExpectedUtility:
    """Expected utility of one permutation, choosing the exact route by kind."""
    e = as_eta(eta)
    sigma = as_permutation(perm, e.size)
    if spec.kind is MetricKind.ACC:
        method = "split_max"
    elif spec.kind in _LINEAR_KINDS:
        method = "gadd_linear"
    else:
        method = "exact_enumeration"
    value = float(utilities_for_perms(spec, e, sigma[None, :])[0])
    return ExpectedUtility(value=value, spec=spec, method=method)


@functools.lru_cache(maxsize=16)
def _all_perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def bayes_optimal_set(
    spec: MetricSpec, eta, tolerance: float = 1e-12
) -> OptimalSet:
    """Argmax set of expected utility over all n! permutations.

    Utilities within ``tolerance`` of the maximum are counted as optimal;
    enumerated utilities on small instances are well separated except at
    true symmetries, so the tolerance only absorbs float rounding.
    """
    e = as_eta(eta)
    n = e.size
    if n > MAX_FACTORIAL_ITEMS:
        raise CapacityError(
            f"optimal-set enumeration limited to n <= {MAX_FACTORIAL_ITEMS}, got {n}"
        )
    perms = _all_perms(n)
    utils = utilities_for_perms(spec, e, perms)
    top = float(utils.max())
    keep = utils >= top - tolerance
    members = frozenset(tuple(int(i) for i in row) for row in perms[keep])
    return OptimalSet(permutations=members, max_utility=top, tolerance=tolerance)


def is_order_preserving(scores, eta) -> bool:
    """True iff every strict eta inequality is preserved by the scores."""
    s = as_scores(scores)
    e = as_eta(eta)
    if s.size != e.size:
        raise ValueError("scores and eta must have equal length")
    eta_gt = e[:, None] > e[None, :]
    score_gt = s[:, None] > s[None, :]
    return bool(np.all(score_gt[eta_gt]))


def is_sign_consistent(scores, eta, tau: float = 0.5) -> bool:
    """True iff every score sits on the same side of tau as eta does of 0.5."""
    s = as_scores(scores)
    e = as_eta(eta)
    if s.size != e.size:
        raise ValueError("scores and eta must have equal length")
    if np.any(e == 0.5):
        raise MarginError("eta contains entries exactly at the 0.5 boundary")
    return bool(np.all((s - tau) * (e - 0.5) > 0))


def check_subsumption(
    spec_a: MetricSpec, spec_b: MetricSpec, eta, tolerance: float = 1e-12
) -> SubsumptionResult:
    """Whether every optimal permutation of metric A is optimal for B.

    On failure the witness is a permutation optimal for A but not B.
    """
    set_a = bayes_optimal_set(spec_a, eta, tolerance)
    set_b = bayes_optimal_set(spec_b, eta, tolerance)
    extra = set_a.permutations - set_b.permutations
    if extra:
        return SubsumptionResult(holds=False, witness=min(extra))
    return SubsumptionResult(holds=True, witness=None)
