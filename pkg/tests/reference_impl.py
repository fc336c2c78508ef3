"""Definition-transcribed reference evaluators used as test oracles.

Everything here is deliberately naive: explicit loops, pair counting,
and the textbook formulas, written without looking at the library
implementations. The library must agree with these on every instance.
"""

from __future__ import annotations

import math


def rank_desc(scores):
    """Indices sorted by descending score, ties by ascending index."""
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))


def precision_at_k(z, k):
    return sum(z[:k]) / k


def recall_at_k(z, k):
    n_pos = sum(z)
    return sum(z[:k]) / n_pos if n_pos else 0.0


def auc(z):
    n_pos = sum(z)
    n_neg = len(z) - n_pos
    correct = 0
    for i in range(len(z)):
        for j in range(len(z)):
            if z[i] == 1 and z[j] == 0 and i < j:
                correct += 1
    return correct / (n_pos * n_neg)


def dcg(z, k, base):
    return sum(z[i] / math.log(i + 2, base) for i in range(min(k, len(z))))


def ndcg(z, k, base):
    ideal = sorted(z, reverse=True)
    denom = dcg(ideal, k, base)
    return dcg(z, k, base) / denom if denom else 0.0


def average_precision_at_k(z, k):
    n_pos = sum(z)
    if n_pos == 0:
        return 0.0
    hits = 0
    total = 0.0
    for i in range(k):
        if z[i]:
            hits += 1
            total += hits / (i + 1)
    return total / min(k, n_pos)


def mrr_at_k(z, k):
    total = 0.0
    for i in range(k):
        blocked = 1.0
        for j in range(i):
            blocked *= 1 - z[j]
        total += z[i] / (i + 1) * blocked
    return total


def accuracy(labels, scores, tau):
    hits = 0
    for y, s in zip(labels, scores):
        hits += int((s > tau) == (y == 1))
    return hits / len(labels)


def expected_metric(metric_fn, eta, perm):
    """Exact expectation of a ranked-label metric under Bernoulli labels.

    Enumerates every label vector with its product probability; the
    metric receives labels in rank order. ``metric_fn`` must handle (or
    never see) degenerate label vectors.
    """
    n = len(eta)
    total = 0.0
    for bits in range(2**n):
        y = [(bits >> i) & 1 for i in range(n)]
        prob = 1.0
        for i in range(n):
            prob *= eta[i] if y[i] else 1 - eta[i]
        z = [y[p] for p in perm]
        total += prob * metric_fn(z)
    return total
