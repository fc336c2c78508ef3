"""Brute-force regret-transfer curves and bound verification.

The transfer curve ``psi(eps)`` for a source/target metric pair is the
worst target regret among predictors whose source regret is at most
``eps``. On a fixed instance the predictor space is finite: rank-based
metrics depend on a score vector only through its ranked label pattern,
and accuracy additionally through a threshold position. Enumerating the
``C(n, n_pos)`` distinct ranked patterns (times ``n + 1`` splits when
accuracy is involved) therefore covers every predictor exactly, which is
why the estimator is an oracle rather than an approximation.

Two regret semantics are supported:

* realized: binary labels are fixed and regrets are the absolute gaps of
  :mod:`rankregret.metrics` values below their ideals;
* expected: items carry conditional probabilities and regrets are gaps
  of exact expected utilities from :mod:`rankregret.oracle`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    TransferBound,
    margin_auc_regret,
    margin_eta,
    margin_ndcg_regret,
    split_accuracy_regret,
)
from .errors import CapacityError
from .metrics import (
    MetricKind,
    MetricSpec,
    as_labels,
    eval_ranked,
    ideal_value,
)
from .oracle import MAX_FACTORIAL_ITEMS, utilities_for_perms

__all__ = [
    "MAX_PSI_ITEMS",
    "PsiCurve",
    "BoundReport",
    "ranked_arrangements",
    "arrangement_to_perm",
    "realized_regret",
    "psi_brute",
    "psi_brute_expected",
    "verify_bound",
]

MAX_PSI_ITEMS = 9
_TOL = 1e-12


@dataclass(frozen=True)
class PsiCurve:
    """A worst-case transfer curve on one instance.

    Points are (eps, sup target regret) pairs sorted by eps; the curve is
    non-decreasing by construction.
    """

    source: str
    target: str
    points: tuple[tuple[float, float], ...]
    instance: dict = field(default_factory=dict)
    mode: str = "realized"

    def __call__(self, eps: float) -> float:
        value = 0.0
        for e, p in self.points:
            if e <= eps + _TOL:
                value = p
            else:
                break
        return value

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "mode": self.mode,
            "instance": dict(self.instance),
            "points": [[e, p] for e, p in self.points],
        }

    def to_csv_rows(self):
        yield "epsilon,psi"
        for e, p in self.points:
            yield f"{e!r},{p!r}"


@dataclass(frozen=True)
class BoundReport:
    """Exhaustive dominance/tightness verdict for one transfer bound."""

    direction: str
    coefficient: float | None
    dominance_holds: bool
    max_violation: float
    violation_witness: tuple[int, ...] | None  # ranked labels of worst violation
    tightness_ratio: float | None
    witness: tuple[int, ...] | None  # ranked labels attaining the worst ratio
    zero_source_target_sup: float  # sup target regret at source regret 0
    n: int
    n_pos: int

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "coefficient": self.coefficient,
            "dominance_holds": self.dominance_holds,
            "max_violation": self.max_violation,
            "violation_witness": list(self.violation_witness)
            if self.violation_witness
            else None,
            "tightness_ratio": self.tightness_ratio,
            "witness_ranked_labels": list(self.witness) if self.witness else None,
            "zero_source_target_sup": self.zero_source_target_sup,
            "n": self.n,
            "n_pos": self.n_pos,
        }


def ranked_arrangements(n: int, n_pos: int) -> np.ndarray:
    """All distinct ranked label patterns with the given class counts."""
    rows = []
    for pos in itertools.combinations(range(n), n_pos):
        z = np.zeros(n, dtype=np.int64)
        z[list(pos)] = 1
        rows.append(z)
    return np.array(rows, dtype=np.int64)


def arrangement_to_perm(labels, ranked: np.ndarray) -> np.ndarray:
    """A permutation of the given items whose ranked labels equal ``ranked``."""
    y = as_labels(labels)
    z = np.asarray(ranked)
    if int(z.sum()) != int(y.sum()) or z.size != y.size:
        raise ValueError("arrangement does not match the label multiset")
    pos_items = iter(np.flatnonzero(y == 1))
    neg_items = iter(np.flatnonzero(y == 0))
    return np.array(
        [next(pos_items) if zi else next(neg_items) for zi in z], dtype=np.int64
    )


def realized_regret(spec: MetricSpec, labels, ranked: np.ndarray) -> float:
    """Absolute regret of a ranked pattern: ideal value minus value."""
    return ideal_value(spec, labels) - eval_ranked(spec, np.asarray(ranked))


def _acc_split_regrets(z: np.ndarray) -> np.ndarray:
    """Misclassified fraction for each of the n + 1 threshold splits."""
    n = z.size
    wrong_in_prefix = np.concatenate(([0], np.cumsum(1 - z)))
    pos_in_suffix = int(z.sum()) - np.concatenate(([0], np.cumsum(z)))
    return (wrong_in_prefix + pos_in_suffix) / n


def _check_capacity(n: int) -> None:
    if n > MAX_PSI_ITEMS:
        raise CapacityError(
            f"brute-force transfer curves limited to n <= {MAX_PSI_ITEMS}, got {n}"
        )


def _realized_pairs(
    source: MetricSpec, target: MetricSpec, labels
) -> np.ndarray:
    """(source regret, target regret) for every predictor on the instance."""
    y = as_labels(labels)
    n = y.size
    _check_capacity(n)
    n_pos = int(y.sum())
    arrangements = ranked_arrangements(n, n_pos)
    both_acc = source.kind is MetricKind.ACC and target.kind is MetricKind.ACC
    pairs = []
    for z in arrangements:
        vals = {}
        for role, spec in (("src", source), ("tgt", target)):
            if spec.kind is MetricKind.ACC:
                vals[role] = _acc_split_regrets(z)
            else:
                vals[role] = np.array([realized_regret(spec, y, z)])
        if both_acc:
            # One shared threshold per predictor: pair splits diagonally.
            pairs.extend(zip(vals["src"], vals["tgt"]))
        else:
            for rs in vals["src"]:
                for rt in vals["tgt"]:
                    pairs.append((float(rs), float(rt)))
    return np.array(pairs)


def _eps_grid_from(pairs: np.ndarray, eps_grid) -> np.ndarray:
    if eps_grid is None:
        return np.unique(pairs[:, 0])
    grid = np.asarray(sorted(float(e) for e in eps_grid))
    if grid.size == 0:
        raise ValueError("eps grid must be non-empty")
    return grid


def _curve_points(pairs: np.ndarray, grid: np.ndarray) -> tuple[tuple[float, float], ...]:
    points = []
    for eps in grid:
        mask = pairs[:, 0] <= eps + _TOL
        sup = float(pairs[mask, 1].max()) if mask.any() else 0.0
        points.append((float(eps), sup))
    return tuple(points)


def psi_brute(
    source: MetricSpec, target: MetricSpec, labels, eps_grid=None
) -> PsiCurve:
    """Exact transfer curve on a fixed binary-label instance.

    The default grid is the sorted set of attainable source regrets, so
    the curve is the exact step function; pass ``eps_grid`` for a custom
    (e.g. uniform plotting) grid.

    Note that with realized binary labels, two items of the same class
    are exchangeable, so zero classification regret forces zero ranking
    regret here; the classification-blindness effect needs the expected
    semantics of :func:`psi_brute_expected`.
    """
    y = as_labels(labels)
    pairs = _realized_pairs(source, target, y)
    grid = _eps_grid_from(pairs, eps_grid)
    return PsiCurve(
        source=source.label(),
        target=target.label(),
        points=_curve_points(pairs, grid),
        instance={"n": int(y.size), "n_pos": int(y.sum())},
        mode="realized",
    )


def _expected_pairs(
    source: MetricSpec, target: MetricSpec, eta: np.ndarray
) -> np.ndarray:
    n = eta.size
    if n > MAX_FACTORIAL_ITEMS:
        raise CapacityError(
            f"expected-mode curves limited to n <= {MAX_FACTORIAL_ITEMS}, got {n}"
        )
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)

    def regrets(spec: MetricSpec) -> np.ndarray:
        if spec.kind is MetricKind.ACC:
            ranked = eta[perms]
            base = (1.0 - ranked).sum(axis=1)
            gains = np.concatenate(
                [np.zeros((perms.shape[0], 1)), np.cumsum(2.0 * ranked - 1.0, axis=1)],
                axis=1,
            )
            utils = (base[:, None] + gains) / n  # (n!, n + 1), one per split
            best = float((np.maximum(eta, 1.0 - eta)).sum() / n)
            return best - utils
        utils = utilities_for_perms(spec, eta, perms)
        return (utils.max() - utils)[:, None]

    r_src = regrets(source)
    r_tgt = regrets(target)
    if source.kind is MetricKind.ACC and target.kind is MetricKind.ACC:
        # One shared threshold per predictor.
        return np.column_stack([r_src.ravel(), r_tgt.ravel()])
    # Otherwise at most one side carries a split axis; pair every choice.
    rs = np.repeat(r_src, r_tgt.shape[1], axis=1).ravel()
    rt = np.tile(r_tgt, (1, r_src.shape[1])).ravel()
    return np.column_stack([rs, rt])


def psi_brute_expected(
    source: MetricSpec, target: MetricSpec, eta, eps_grid=None
) -> PsiCurve:
    """Exact transfer curve under expected utilities for given eta."""
    from .metrics import as_eta

    e = as_eta(eta)
    pairs = _expected_pairs(source, target, e)
    grid = _eps_grid_from(pairs, eps_grid)
    return PsiCurve(
        source=source.label(),
        target=target.label(),
        points=_curve_points(pairs, grid),
        instance={"n": int(e.size), "eta": [float(v) for v in e]},
        mode="expected",
    )


def _direction_regret_pair(bound: TransferBound):
    """Per-arrangement (source regret, target regret) evaluator for a bound."""
    direction = bound.direction
    params = bound.params
    log_base = params.get("log_base", np.e)

    if direction == "auc_to_ndcg":
        auc = MetricSpec(MetricKind.AUC)
        ndcg = MetricSpec(MetricKind.NDCG, log_base=log_base)

        def pair(y, z):
            return realized_regret(auc, y, z), realized_regret(ndcg, y, z)

    elif direction == "ndcg_to_auc":
        auc = MetricSpec(MetricKind.AUC)
        ndcg = MetricSpec(MetricKind.NDCG, log_base=log_base)

        def pair(y, z):
            return realized_regret(ndcg, y, z), realized_regret(auc, y, z)

    elif direction == "auc_to_acc":
        delta = params["delta"]

        def pair(y, z):
            return margin_auc_regret(z, delta), split_accuracy_regret(z)

    elif direction == "ndcg_to_acc":
        delta = params["delta"]

        def pair(y, z):
            return (
                margin_ndcg_regret(z, delta, log_base),
                split_accuracy_regret(z),
            )

    elif direction.startswith("trunc_"):
        kind = MetricKind(params["kind"])
        base = params.get("log_base", 2.0)
        src = MetricSpec(kind, k=params["src_k"], log_base=base)
        tgt = MetricSpec(kind, k=params["tgt_k"], log_base=base)

        def pair(y, z):
            return realized_regret(src, y, z), realized_regret(tgt, y, z)

    else:
        raise ValueError(f"no verifier for direction {direction!r}")
    return pair


def verify_bound(bound: TransferBound, labels) -> BoundReport:
    """Exhaustively check a bound's dominance and tightness on an instance.

    Enumerates every ranked arrangement of the label multiset and
    reports (a) whether ``regret_B <= C * regret_A`` holds throughout
    (slack 1e-9), (b) the worst observed ratio with its witness, and
    (c) the sup of target regret at exactly zero source regret, which is
    positive iff the direction diverges on the instance.
    """
    y = as_labels(labels)
    n = y.size
    _check_capacity(n)
    n_pos = int(y.sum())
    pair_fn = _direction_regret_pair(bound)
    best_ratio = None
    witness = None
    max_violation = 0.0
    violation_witness = None
    zero_sup = 0.0
    for z in ranked_arrangements(n, n_pos):
        r_src, r_tgt = pair_fn(y, z)
        if bound.coefficient is not None:
            violation = r_tgt - bound.coefficient * r_src
            if violation > max_violation:
                max_violation = violation
                violation_witness = tuple(int(v) for v in z)
        if r_src <= _TOL:
            zero_sup = max(zero_sup, r_tgt)
        elif r_src > 0:
            ratio = r_tgt / r_src
            if best_ratio is None or ratio > best_ratio:
                best_ratio = ratio
                witness = tuple(int(v) for v in z)
    return BoundReport(
        direction=bound.direction,
        coefficient=bound.coefficient,
        dominance_holds=(bound.coefficient is not None and max_violation <= 1e-9),
        max_violation=float(max_violation),
        violation_witness=violation_witness,
        tightness_ratio=best_ratio,
        witness=witness,
        zero_source_target_sup=float(zero_sup),
        n=n,
        n_pos=n_pos,
    )
