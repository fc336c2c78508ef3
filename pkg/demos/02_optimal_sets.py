"""Enumerate Bayes-optimal permutation sets and their structural relations.

Items carry conditional relevance probabilities; the oracle enumerates
all orderings, scores each by its exact expected utility, and returns
the argmax set. The demo shows which metrics share optimal sets, which
merely contain others, and a counterexample: flat-window truncations
(precision/recall at k) select *sets* of top items, so their optimal
orderings are not nested across depths the way sharply discounted
truncations are.
"""

import numpy as np

import rankregret as rr
from rankregret import MetricKind, MetricSpec

eta = np.array([0.9, 0.6, 0.2])
print("probabilities:", eta.tolist())

for name, spec in (
    ("AUC", MetricSpec(MetricKind.AUC)),
    ("NDCG", MetricSpec(MetricKind.NDCG)),
    ("MAP", MetricSpec(MetricKind.MAP)),
    ("MRR", MetricSpec(MetricKind.MRR)),
    ("accuracy", MetricSpec(MetricKind.ACC)),
    ("precision@1", MetricSpec(MetricKind.PRECISION_AT_K, k=1)),
    ("precision@2", MetricSpec(MetricKind.PRECISION_AT_K, k=2)),
):
    opt = rr.bayes_optimal_set(spec, eta)
    print(f"{name:12s} optimal orderings: {sorted(opt.permutations)}")

print()
print("Pairwise and listwise metrics agree exactly; accuracy also accepts")
print("the within-class reversal (1, 0, 2), because classification never")
print("compares items on the same side of the boundary:")
result = rr.check_subsumption(
    MetricSpec(MetricKind.ACC), MetricSpec(MetricKind.AUC), eta
)
print("  accuracy-optimal inside AUC-optimal?", result.holds, "witness:", result.witness)
result = rr.check_subsumption(
    MetricSpec(MetricKind.NDCG), MetricSpec(MetricKind.ACC), eta
)
print("  NDCG-optimal inside accuracy-optimal?", result.holds)

print()
print("Truncation nesting holds for sharply discounted windows:")
deeper = MetricSpec(MetricKind.NDCG, k=2)
shallower = MetricSpec(MetricKind.NDCG, k=1)
print("  NDCG@2-optimal inside NDCG@1-optimal?",
      rr.check_subsumption(deeper, shallower, eta).holds)

print()
print("...but fails for flat windows. With eta (0.9, 0.6, 0.1), any")
print("ordering whose top two items are the two best is precision@2")
print("optimal, including one that puts 0.6 first; that ordering is of")
print("course not precision@1 optimal:")
eta2 = np.array([0.9, 0.6, 0.1])
p2 = rr.bayes_optimal_set(MetricSpec(MetricKind.PRECISION_AT_K, k=2), eta2)
p1 = rr.bayes_optimal_set(MetricSpec(MetricKind.PRECISION_AT_K, k=1), eta2)
print("  precision@2 optimal:", sorted(p2.permutations))
print("  precision@1 optimal:", sorted(p1.permutations))
print("  nested?", p2.permutations <= p1.permutations)
