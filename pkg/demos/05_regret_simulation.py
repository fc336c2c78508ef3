"""Simulate regret trajectories of three loss-specific error models.

Each model corrupts the ground-truth relevance probabilities in its own
characteristic way and anneals back to them as the convergence
parameter approaches one. Snapshots land in a three-axis regret space
(classification, pairwise, listwise); the summary table shows the
persistent ordering: the class-respecting pointwise model is perfect on
classification yet worst on both ranking axes, while the head-protecting
listwise model is best on both ranking axes.
"""

from pathlib import Path

import rankregret as rr
from rankregret.simulate import (
    write_scatter_svg,
    write_snapshots_csv,
    write_summary_json,
)

OUT = Path(__file__).resolve().parent / "demo_output"
OUT.mkdir(exist_ok=True)

config = rr.SimConfig(n=1000, snapshots=500, seed=0)
result = rr.run_simulation(config)

print(f"{'model':10s} {'mean r_acc':>12s} {'mean r_auc':>12s} {'mean r_ndcg':>12s}")
for loss in config.losses:
    stats = result.summary["per_loss"][loss]
    print(
        f"{loss:10s} {stats['mean_r_acc']:12.5f} "
        f"{stats['mean_r_auc']:12.5f} {stats['mean_r_ndcg']:12.5f}"
    )

write_snapshots_csv(OUT / "snapshots.csv", result)
write_summary_json(OUT / "summary.json", result)
write_scatter_svg(OUT / "regret_scatter.svg", result)
print()
print(f"snapshot table, summary and scatter written to {OUT}")
print()
print("Things to notice:")
print(" * pointwise r_acc is exactly zero at every snapshot (its noise")
print("   never crosses the decision boundary) yet its ranking regrets")
print("   are the largest: classification optimality buys no ordering.")
print(" * the listwise model's log-damped noise protects the head of")
print("   the list, giving the smallest pairwise AND listwise regrets.")
print(" * a single top-pair swap barely moves the pairwise regret but")
print("   is clearly visible in the listwise one (see demo 01/03).")
