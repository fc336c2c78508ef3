"""rankregret: exact ranking metrics, optimal-set oracles, and regret transfer.

The package evaluates binary-relevance ranking and classification
metrics exactly on finite lists, enumerates Bayes-optimal permutation
sets under Bernoulli relevance, computes closed-form regret-transfer
coefficients together with brute-force verification of their dominance
and tightness, scans their asymptotic growth, and simulates regret
trajectories of loss-specific error models.
"""

from .bounds import (
    RateFit,
    TransferBound,
    WeightDifferentials,
    asymptotic_rate_scan,
    coeff_auc_to_acc,
    coeff_auc_to_ndcg,
    coeff_ndcg_to_acc,
    coeff_ndcg_to_auc,
    coeff_truncation,
    delta_extremes,
    idcg_sum,
    margin_auc_regret,
    margin_eta,
    margin_ndcg_regret,
    pointwise_failure_witness,
    split_accuracy_regret,
    worst_case_construct,
)
from .errors import CapacityError, MarginError, UndefinedMetricError
from .metrics import (
    MetricGroup,
    MetricKind,
    MetricSpec,
    RegretReport,
    accuracy_at_split,
    dcg_regret,
    dcg_value,
    discount_weights,
    eval_accuracy,
    eval_metric,
    ideal_dcg,
    ideal_value,
    metric_regret,
    rank_by_scores,
)
from .oracle import (
    ExpectedUtility,
    OptimalSet,
    SubsumptionResult,
    bayes_optimal_set,
    check_subsumption,
    expected_dcg,
    expected_utility,
    is_order_preserving,
    is_sign_consistent,
)
from .psi import BoundReport, PsiCurve, psi_brute, psi_brute_expected, verify_bound
from .simulate import (
    SimConfig,
    SimulationResult,
    Snapshot,
    apply_error_model,
    gen_eta,
    run_simulation,
    snapshot_regrets,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # metrics
    "MetricGroup",
    "MetricKind",
    "MetricSpec",
    "RegretReport",
    "rank_by_scores",
    "eval_metric",
    "eval_accuracy",
    "accuracy_at_split",
    "ideal_value",
    "dcg_value",
    "ideal_dcg",
    "dcg_regret",
    "discount_weights",
    "metric_regret",
    # oracle
    "ExpectedUtility",
    "OptimalSet",
    "SubsumptionResult",
    "expected_utility",
    "expected_dcg",
    "bayes_optimal_set",
    "is_order_preserving",
    "is_sign_consistent",
    "check_subsumption",
    # bounds
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
    "margin_auc_regret",
    "margin_ndcg_regret",
    "split_accuracy_regret",
    "asymptotic_rate_scan",
    # psi
    "PsiCurve",
    "BoundReport",
    "psi_brute",
    "psi_brute_expected",
    "verify_bound",
    # simulation
    "SimConfig",
    "Snapshot",
    "SimulationResult",
    "gen_eta",
    "apply_error_model",
    "snapshot_regrets",
    "run_simulation",
    # errors
    "UndefinedMetricError",
    "CapacityError",
    "MarginError",
]
