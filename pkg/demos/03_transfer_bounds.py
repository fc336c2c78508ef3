"""Regret-transfer coefficients, their witnesses, and brute-force audits.

The transfer coefficient C for a direction A -> B promises
``regret_B <= C * regret_A`` over all orderings of a fixed label
multiset. This demo computes the closed forms, exhibits the instances
that attain them with equality, exhaustively audits every direction,
and plots (as CSV) a full worst-case transfer curve. One audit is a
deliberate negative result: the listwise-to-classification envelope is
refuted by a boundary swap deep in the list, and the report shows the
counterexample.
"""

from pathlib import Path

import numpy as np

import rankregret as rr
from rankregret import MetricKind, MetricSpec

OUT = Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)

print("== Closed forms at n=8, balanced classes ==")
b_rl = rr.coeff_auc_to_ndcg(4, 4)
b_lr = rr.coeff_ndcg_to_auc(4, 4)
d = rr.delta_extremes(8)
print(f"pairwise->listwise  C = {b_rl.coefficient:.4f}")
print(f"listwise->pairwise  C = {b_lr.coefficient:.4f}")
print(f"product = {b_rl.coefficient * b_lr.coefficient:.4f}"
      f" = gap ratio {d.delta_max / d.delta_min:.4f}")

print()
print("== Attainability witnesses ==")
for direction in ("auc_to_ndcg", "ndcg_to_auc"):
    labels, perm = rr.worst_case_construct(direction, 6)
    print(f"{direction}: ranked labels {labels[perm].tolist()}")

print()
print("== Exhaustive audit over one multiset (n=7, 3 positives) ==")
labels = np.array([1, 1, 1, 0, 0, 0, 0])
for bound in (
    rr.coeff_auc_to_ndcg(3, 4),
    rr.coeff_ndcg_to_auc(3, 4),
    rr.coeff_auc_to_acc(7, 3, 4, delta=0.25),
    rr.coeff_ndcg_to_acc(7, 0.25, n_pos=3),
):
    report = rr.verify_bound(bound, labels)
    status = "holds" if report.dominance_holds else "REFUTED"
    print(
        f"{bound.direction:12s} C={bound.coefficient:8.3f} dominance {status:8s}"
        f" worst ratio={report.tightness_ratio:8.3f}"
    )
    if not report.dominance_holds:
        print(
            f"   counterexample ranked labels: {list(report.violation_witness)}"
            f" (violation {report.max_violation:.4f})"
        )

print()
print("== Zero classification regret, positive ranking regret ==")
eta, scores = rr.pointwise_failure_witness(4)
print("probabilities:", eta.round(3).tolist(), "scores:", scores.round(3).tolist())
print("sign consistent:", rr.is_sign_consistent(scores, eta))
curve = rr.psi_brute_expected(
    MetricSpec(MetricKind.ACC), MetricSpec(MetricKind.AUC), eta
)
print("accuracy->AUC transfer curve at zero:", curve(0.0))

print()
print("== Full transfer curve as CSV ==")
labels6 = np.array([1, 1, 1, 0, 0, 0])
curve = rr.psi_brute(
    MetricSpec(MetricKind.AUC), MetricSpec(MetricKind.NDCG), labels6
)
path = OUT / "psi_auc_to_ndcg_n6.csv"
path.write_text("\n".join(curve.to_csv_rows()) + "\n")
print(f"worst-case curve written to {path}")
print("last point (unconstrained sup):", curve.points[-1])
