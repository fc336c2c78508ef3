"""Named exhaustive property checks over small-instance enumerations.

Each check sweeps a family of instances, observes whether a structural
property holds, and compares the observation against its *expected*
outcome. Three expectations occur:

* ``holds``: the property is provable and enumeration must find zero
  violations;
* ``diverges``: the property is a divergence claim (positive target
  regret at zero source regret) and divergence must be observed;
* ``refuted``: exhaustive search is known to produce counterexamples to
  the textbook-style claim, and the check passes exactly when it finds
  one (the counterexample is reported as the witness).

A check *passes* when observation and expectation agree, so a clean run
certifies both the positive results and the documented refutations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    coeff_auc_to_acc,
    coeff_auc_to_ndcg,
    coeff_ndcg_to_acc,
    coeff_ndcg_to_auc,
    coeff_truncation,
    margin_auc_regret,
    margin_ndcg_regret,
    pointwise_failure_witness,
    split_accuracy_regret,
    worst_case_construct,
)
from .metrics import MetricKind, MetricSpec, eval_accuracy, eval_metric, ideal_value, rank_by_scores
from .oracle import bayes_optimal_set, expected_utility, is_sign_consistent
from .psi import psi_brute_expected, ranked_arrangements, verify_bound

__all__ = [
    "CheckResult",
    "eta_multisets",
    "check_ranking_dominance",
    "check_ranking_attainability",
    "check_classification_dominance",
    "check_classification_attainability",
    "check_classification_blindness",
    "check_optimal_set_relations",
    "check_truncation_transfer",
    "run_all_checks",
]

_E = math.e
_SLACK = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    expectation: str  # "holds" | "refuted" | "diverges"
    observed: str
    detail: str = ""
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.observed == self.expectation

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expectation": self.expectation,
            "observed": self.observed,
            "passed": self.passed,
            "detail": self.detail,
            "witness": dict(self.witness),
        }


def _label_multisets(n_min: int, n_max: int):
    for n in range(n_min, n_max + 1):
        for n_pos in range(1, n):
            yield n, n_pos


def _labels(n: int, n_pos: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.int64)
    out[:n_pos] = 1
    return out


def eta_multisets(values, n_min: int, n_max: int, distinct: bool = False):
    """Probability multisets drawn from a value pool.

    Optimal-set relations are equivariant under relabeling items, so
    sweeping multisets covers every assignment of the pool values.
    """
    vals = tuple(sorted(values))
    for n in range(n_min, n_max + 1):
        source = (
            itertools.combinations(vals, n)
            if distinct
            else itertools.combinations_with_replacement(vals, n)
        )
        for combo in source:
            yield np.array(combo, dtype=np.float64)


def check_ranking_dominance(n_max: int = 8, log_base: float = _E) -> list[CheckResult]:
    """Both pairwise<->listwise envelopes over every label multiset."""
    results = []
    for name, make in (
        ("pairwise-to-listwise-dominance", coeff_auc_to_ndcg),
        ("listwise-to-pairwise-dominance", coeff_ndcg_to_auc),
    ):
        worst = 0.0
        witness: dict = {}
        for n, n_pos in _label_multisets(3, n_max):
            bound = make(n_pos, n - n_pos, log_base)
            report = verify_bound(bound, _labels(n, n_pos))
            if report.max_violation > worst:
                worst = report.max_violation
                witness = {"n": n, "n_pos": n_pos, "violation": worst}
        observed = "holds" if worst <= _SLACK else "refuted"
        results.append(
            CheckResult(
                name=name,
                expectation="holds",
                observed=observed,
                detail=f"max dominance violation {worst:.3e} over multisets with 3 <= n <= {n_max}",
                witness=witness,
            )
        )
    return results


def _construct_ratio(direction: str, n: int, log_base: float) -> tuple[float, float]:
    labels, perm = worst_case_construct(direction, n)
    n_pos = int(labels.sum())
    n_neg = n - n_pos
    ndcg = MetricSpec(MetricKind.NDCG, log_base=log_base)
    auc = MetricSpec(MetricKind.AUC)
    r_ndcg = ideal_value(ndcg, labels) - eval_metric(ndcg, labels, perm)
    r_auc = ideal_value(auc, labels) - eval_metric(auc, labels, perm)
    if direction == "auc_to_ndcg":
        return r_ndcg / r_auc, coeff_auc_to_ndcg(n_pos, n_neg, log_base).coefficient
    return r_auc / r_ndcg, coeff_ndcg_to_auc(n_pos, n_neg, log_base).coefficient


def check_ranking_attainability(
    n_min: int = 4, n_max: int = 9, log_base: float = _E, tol: float = _SLACK
) -> list[CheckResult]:
    """The witness constructions achieve the envelope ratio exactly."""
    results = []
    for direction, name in (
        ("auc_to_ndcg", "pairwise-to-listwise-attainability"),
        ("ndcg_to_auc", "listwise-to-pairwise-attainability"),
    ):
        worst_gap = 0.0
        witness: dict = {}
        for n in range(n_min, n_max + 1):
            ratio, coeff = _construct_ratio(direction, n, log_base)
            gap = abs(ratio - coeff)
            if gap > worst_gap:
                worst_gap = gap
                witness = {"n": n, "ratio": ratio, "coefficient": coeff}
        observed = "holds" if worst_gap <= tol else "refuted"
        results.append(
            CheckResult(
                name=name,
                expectation="holds",
                observed=observed,
                detail=f"max |ratio - C| = {worst_gap:.3e} for {n_min} <= n <= {n_max}",
                witness=witness,
            )
        )
    return results


def check_classification_dominance(
    n_max: int = 8, deltas=(0.1, 0.25, 0.4), log_base: float = _E
) -> list[CheckResult]:
    """Ranking-to-classification envelopes under the margin quotient.

    The pairwise direction provably dominates; the listwise one is
    refuted by a swap across the class boundary deep in the list, where
    the discount gap is far smaller than the bottom discount the closed
    form uses. Expectations are set accordingly.
    """
    results = []
    for direction, make, expectation, name in (
        (
            "auc_to_acc",
            lambda n, n_pos, d: coeff_auc_to_acc(n, n_pos, n - n_pos, d),
            "holds",
            "pairwise-to-classification-dominance",
        ),
        (
            "ndcg_to_acc",
            lambda n, n_pos, d: coeff_ndcg_to_acc(n, d, log_base, n_pos),
            "refuted",
            "listwise-to-classification-dominance",
        ),
    ):
        worst = 0.0
        witness: dict = {}
        for delta in deltas:
            for n, n_pos in _label_multisets(3, n_max):
                bound = make(n, n_pos, delta)
                report = verify_bound(bound, _labels(n, n_pos))
                if report.max_violation > worst:
                    worst = report.max_violation
                    witness = {
                        "n": n,
                        "n_pos": n_pos,
                        "delta": delta,
                        "violation": worst,
                        "ranked_labels": list(report.violation_witness or ()),
                    }
        observed = "holds" if worst <= _SLACK else "refuted"
        results.append(
            CheckResult(
                name=name,
                expectation=expectation,
                observed=observed,
                detail=f"max dominance violation {worst:.3e} over multisets and deltas {tuple(deltas)}",
                witness=witness,
            )
        )
    return results


def check_classification_attainability(
    n_min: int = 4, n_max: int = 9, deltas=(0.1, 0.25, 0.4), log_base: float = _E
) -> list[CheckResult]:
    """Boundary-swap attainability of the classification envelopes."""
    results = []
    for direction, expectation, name in (
        ("auc_to_acc", "holds", "pairwise-to-classification-attainability"),
        ("ndcg_to_acc", "refuted", "listwise-to-classification-attainability"),
    ):
        worst_gap = 0.0
        witness: dict = {}
        for delta in deltas:
            for n in range(n_min, n_max + 1):
                labels, perm = worst_case_construct(direction, n)
                n_pos = int(labels.sum())
                ranked = labels[perm]
                r_acc = split_accuracy_regret(ranked)
                if direction == "auc_to_acc":
                    r_src = margin_auc_regret(ranked, delta)
                    coeff = coeff_auc_to_acc(n, n_pos, n - n_pos, delta).coefficient
                else:
                    r_src = margin_ndcg_regret(ranked, delta, log_base)
                    coeff = coeff_ndcg_to_acc(n, delta, log_base, n_pos).coefficient
                gap = abs(r_acc / r_src - coeff)
                if gap > worst_gap:
                    worst_gap = gap
                    witness = {"n": n, "delta": delta, "ratio": r_acc / r_src, "coefficient": coeff}
        observed = "holds" if worst_gap <= _SLACK else "refuted"
        results.append(
            CheckResult(
                name=name,
                expectation=expectation,
                observed=observed,
                detail=f"max |ratio - C| = {worst_gap:.3e}",
                witness=witness,
            )
        )
    return results


def _has_two_same_class_distinct(eta: np.ndarray) -> bool:
    hi = np.unique(eta[eta > 0.5])
    lo = np.unique(eta[eta < 0.5])
    return hi.size >= 2 or lo.size >= 2


def check_classification_blindness(
    n_max: int = 8,
    psi_values=(0.1, 0.3, 0.6, 0.9),
    psi_n_max: int = 5,
    min_regret: float = 1e-3,
) -> list[CheckResult]:
    """Zero classification regret coexists with positive ranking regret.

    Part one: the explicit witness construction keeps the threshold
    decisions exact while reversing two confident items, for every list
    length up to ``n_max``. Part two: on every probability multiset
    containing two same-class items with distinct probabilities, the
    transfer curve from accuracy to AUC is already positive at zero.
    """
    auc = MetricSpec(MetricKind.AUC)
    ndcg = MetricSpec(MetricKind.NDCG)
    acc = MetricSpec(MetricKind.ACC)
    worst_min = float("inf")
    witness: dict = {}
    for n in range(2, n_max + 1):
        eta, scores = pointwise_failure_witness(n)
        assert is_sign_consistent(scores, eta)
        labels = (eta > 0.5).astype(np.int64)
        acc_regret = 1.0 - eval_accuracy(labels, scores)
        perm = rank_by_scores(scores)
        ideal_perm = rank_by_scores(eta)
        regrets = {}
        for spec, tag in ((auc, "auc"), (ndcg, "ndcg")):
            gap = (
                expected_utility(spec, eta, ideal_perm).value
                - expected_utility(spec, eta, perm).value
            )
            regrets[tag] = gap
        low = min(regrets.values())
        if acc_regret != 0.0:
            worst_min = -1.0
            witness = {"n": n, "acc_regret": acc_regret}
            break
        if low < worst_min:
            worst_min = low
            witness = {"n": n, **regrets}
    observed = "holds" if worst_min >= min_regret else "refuted"
    witness_result = CheckResult(
        name="classification-blindness-witness",
        expectation="holds",
        observed=observed,
        detail=(
            f"zero classification regret with ranking regrets >= {worst_min:.4g} "
            f"for 2 <= n <= {n_max}"
        ),
        witness=witness,
    )

    min_psi0 = float("inf")
    psi_witness: dict = {}
    count = 0
    for eta in eta_multisets(psi_values, 2, psi_n_max):
        if not _has_two_same_class_distinct(eta):
            continue
        count += 1
        curve = psi_brute_expected(acc, auc, eta)
        psi0 = curve(0.0)
        if psi0 < min_psi0:
            min_psi0 = psi0
            psi_witness = {"eta": [float(v) for v in eta], "psi0": psi0}
    psi_result = CheckResult(
        name="classification-blindness-transfer",
        expectation="holds",
        observed="holds" if min_psi0 > 0.0 else "refuted",
        detail=f"min psi(0) = {min_psi0:.4g} over {count} mixed-class multisets",
        witness=psi_witness,
    )
    return [witness_result, psi_result]


def _grid_optimal_sets(eta: np.ndarray, log_base: float):
    n = eta.size
    sets = {
        "auc": bayes_optimal_set(MetricSpec(MetricKind.AUC), eta).permutations,
        "ndcg": bayes_optimal_set(
            MetricSpec(MetricKind.NDCG, log_base=log_base), eta
        ).permutations,
        "acc": bayes_optimal_set(MetricSpec(MetricKind.ACC), eta).permutations,
    }
    for k in range(1, n):
        sets[f"p@{k}"] = bayes_optimal_set(
            MetricSpec(MetricKind.PRECISION_AT_K, k=k), eta
        ).permutations
        sets[f"r@{k}"] = bayes_optimal_set(
            MetricSpec(MetricKind.RECALL_AT_K, k=k), eta
        ).permutations
        sets[f"ndcg@{k}"] = bayes_optimal_set(
            MetricSpec(MetricKind.NDCG, k=k, log_base=log_base), eta
        ).permutations
    return sets


def check_optimal_set_relations(
    values=(0.1, 0.3, 0.6, 0.9), n_max: int = 5, log_base: float = 2.0
) -> list[CheckResult]:
    """Structural relations between Bayes-optimal sets on a value grid.

    Covers pairwise/listwise equality, the first-relevant-item family
    (MAP, MRR) against NDCG on distinct probabilities, precision/recall
    equivalence at every depth, inclusion of listwise-optimal orderings
    in the classification-optimal set (strict somewhere), nesting of
    sharply-discounted truncations, and the refuted nesting of
    flat-window truncations.
    """
    eq_auc_ndcg = True
    prp_equal = True
    pk_rk_equal = True
    listwise_in_acc = True
    strict_witness = None
    nest_ndcg = True
    flat_counterexample = None
    first_violation: dict = {}

    for eta in eta_multisets(values, 2, n_max):
        n = eta.size
        sets = _grid_optimal_sets(eta, log_base)
        if sets["auc"] != sets["ndcg"]:
            eq_auc_ndcg = False
            first_violation.setdefault("auc_ndcg", {"eta": list(map(float, eta))})
        if not sets["ndcg"] <= sets["acc"]:
            listwise_in_acc = False
            first_violation.setdefault("listwise_acc", {"eta": list(map(float, eta))})
        if strict_witness is None and sets["ndcg"] < sets["acc"]:
            strict_witness = {"eta": [float(v) for v in eta]}
        for k in range(1, n):
            if sets[f"p@{k}"] != sets[f"r@{k}"]:
                pk_rk_equal = False
                first_violation.setdefault(
                    "pk_rk", {"eta": list(map(float, eta)), "k": k}
                )
        for k1 in range(1, n):
            for k2 in range(k1 + 1, n):
                if not sets[f"ndcg@{k2}"] <= sets[f"ndcg@{k1}"]:
                    nest_ndcg = False
                    first_violation.setdefault(
                        "ndcg_nest", {"eta": list(map(float, eta)), "k1": k1, "k2": k2}
                    )
                if flat_counterexample is None and not (
                    sets[f"p@{k2}"] <= sets[f"p@{k1}"]
                ):
                    flat_counterexample = {
                        "eta": [float(v) for v in eta],
                        "k1": k1,
                        "k2": k2,
                    }

    for eta in eta_multisets(values, 2, min(n_max, len(values)), distinct=True):
        sets = {
            kind: bayes_optimal_set(MetricSpec(kind_enum), eta).permutations
            for kind, kind_enum in (
                ("ndcg", MetricKind.NDCG),
                ("map", MetricKind.MAP),
                ("mrr", MetricKind.MRR),
            )
        }
        if not (sets["ndcg"] == sets["map"] == sets["mrr"]):
            prp_equal = False
            first_violation.setdefault("prp", {"eta": list(map(float, eta))})

    return [
        CheckResult(
            name="optimal-set-equality-pairwise-listwise",
            expectation="holds",
            observed="holds" if eq_auc_ndcg else "refuted",
            detail="AUC and NDCG optimal sets agree on every grid multiset",
            witness=first_violation.get("auc_ndcg", {}),
        ),
        CheckResult(
            name="optimal-set-equality-prp",
            expectation="holds",
            observed="holds" if prp_equal else "refuted",
            detail="NDCG, MAP and MRR optimal sets agree on distinct-probability multisets",
            witness=first_violation.get("prp", {}),
        ),
        CheckResult(
            name="precision-recall-equivalence",
            expectation="holds",
            observed="holds" if pk_rk_equal else "refuted",
            detail="precision@k and recall@k optimal sets agree at every depth",
            witness=first_violation.get("pk_rk", {}),
        ),
        CheckResult(
            name="listwise-within-classification",
            expectation="holds",
            observed="holds" if (listwise_in_acc and strict_witness) else "refuted",
            detail="listwise-optimal orderings classify optimally; inclusion strict somewhere",
            witness=strict_witness or first_violation.get("listwise_acc", {}),
        ),
        CheckResult(
            name="truncation-nesting-sharp",
            expectation="holds",
            observed="holds" if nest_ndcg else "refuted",
            detail="deeper NDCG truncations have nested optimal sets",
            witness=first_violation.get("ndcg_nest", {}),
        ),
        CheckResult(
            name="truncation-nesting-flat",
            expectation="refuted",
            observed="refuted" if flat_counterexample else "holds",
            detail=(
                "flat-window truncations select sets, not prefixes: a depth-k2 "
                "optimal ordering need not be depth-k1 optimal"
            ),
            witness=flat_counterexample or {},
        ),
    ]


def check_truncation_transfer(n_max: int = 8, log_base: float = 2.0) -> list[CheckResult]:
    """Truncation regret transfer: downward envelopes and reverse divergence.

    The downward coefficients certify dominance when the deeper window
    still fits inside the positives (k2 <= n_pos); beyond that the
    ideal window shrinks while recoveries deep in the list remain
    possible, and enumeration refutes the envelope. The reverse
    direction must diverge.
    """
    worst_in_scope = 0.0
    refuted_example: dict = {}
    diverged = 0.0
    div_witness: dict = {}
    for n, n_pos in _label_multisets(3, n_max):
        labels = _labels(n, n_pos)
        for kind in (MetricKind.PRECISION_AT_K, MetricKind.NDCG):
            spec = MetricSpec(kind, k=1, log_base=log_base)
            for k1 in range(1, n):
                for k2 in range(k1 + 1, n + 1):
                    bound = coeff_truncation(k1, k2, spec, labels)
                    report = verify_bound(bound, labels)
                    if k2 <= n_pos:
                        worst_in_scope = max(worst_in_scope, report.max_violation)
                    elif not refuted_example and report.max_violation > _SLACK:
                        refuted_example = {
                            "kind": kind.value,
                            "n": n,
                            "n_pos": n_pos,
                            "k1": k1,
                            "k2": k2,
                            "violation": report.max_violation,
                        }
                    rev = coeff_truncation(k1, k2, spec, labels, direction="up")
                    rev_report = verify_bound(rev, labels)
                    if k2 <= n_pos and rev_report.zero_source_target_sup > diverged:
                        diverged = rev_report.zero_source_target_sup
                        div_witness = {"n": n, "n_pos": n_pos, "k1": k1, "k2": k2}
    return [
        CheckResult(
            name="truncation-transfer-down",
            expectation="holds",
            observed="holds" if worst_in_scope <= _SLACK else "refuted",
            detail=(
                f"max violation {worst_in_scope:.3e} over windows with k2 <= n_pos"
            ),
            witness={},
        ),
        CheckResult(
            name="truncation-transfer-down-overhang",
            expectation="refuted",
            observed="refuted" if refuted_example else "holds",
            detail="the downward envelope fails once the window extends past the positives",
            witness=refuted_example,
        ),
        CheckResult(
            name="truncation-transfer-reverse",
            expectation="diverges",
            observed="diverges" if diverged > 0 else "holds",
            detail=f"max target regret at zero source regret {diverged:.4g}",
            witness=div_witness,
        ),
    ]


def run_all_checks(
    n_max: int = 7,
    eta_values=(0.1, 0.3, 0.6, 0.9),
    eta_n_max: int = 5,
    deltas=(0.1, 0.25, 0.4),
) -> list[CheckResult]:
    """The full checklist at CLI scale. All results should pass."""
    results: list[CheckResult] = []
    results += check_ranking_dominance(n_max=n_max)
    results += check_ranking_attainability(n_max=max(4, min(n_max + 1, 9)))
    results += check_classification_dominance(n_max=n_max, deltas=deltas)
    results += check_classification_attainability(deltas=deltas)
    results += check_classification_blindness(
        n_max=min(n_max, 8), psi_values=eta_values, psi_n_max=min(eta_n_max, 5)
    )
    results += check_optimal_set_relations(values=eta_values, n_max=eta_n_max)
    results += check_truncation_transfer(n_max=min(n_max, 7))
    return results
