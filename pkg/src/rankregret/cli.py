"""Command-line front end.

Subcommands: ``metrics`` (evaluate regret reports over CSV lists),
``bounds`` (closed-form transfer coefficients), ``psi`` (brute-force
transfer curves), ``verify`` (exhaustive property checklist),
``simulate`` (regret-trajectory simulation artifacts), and ``rates``
(asymptotic coefficient scans).

Exit codes: 0 success (including expected divergences and documented
refutations in ``verify``), 1 property-check mismatch, 2 input error,
3 capacity error. Every JSON artifact embeds the effective
configuration, so re-running with it reproduces the bytes.
"""

from __future__ import annotations

import functools
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .bounds import (
    coeff_auc_to_acc,
    coeff_auc_to_ndcg,
    coeff_ndcg_to_acc,
    coeff_ndcg_to_auc,
    coeff_truncation,
    asymptotic_rate_scan,
)
from .errors import CapacityError, UndefinedMetricError
from .io import InputError, dumps, iter_instances, read_instance_csv, report_record
from .metrics import MetricKind, MetricSpec, metric_regret
from .psi import psi_brute
from .simulate import (
    SimConfig,
    run_simulation,
    write_scatter_svg,
    write_snapshots_csv,
    write_summary_json,
)
from .verify import run_all_checks

_KIND_CHOICES = [k.value for k in MetricKind]
_RANK_DIRECTIONS = ("auc_to_ndcg", "ndcg_to_auc", "auc_to_acc", "ndcg_to_acc", "trunc")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3


def _exit_codes(fn):
    """Map domain errors onto the stable exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapacityError as exc:
            click.echo(f"capacity error: {exc}", err=True)
            sys.exit(EXIT_CAPACITY)
        except (InputError, OSError, json.JSONDecodeError, ValueError) as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n", "utf-8")


def _parse_base(value: str) -> float:
    if value in ("e", "E"):
        return math.e
    return float(value)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Exact ranking metrics, optimal-set oracles, and regret transfer."""


@main.command("metrics")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--kind", type=click.Choice(_KIND_CHOICES), required=True)
@click.option("--k", type=int, default=None, help="Truncation depth.")
@click.option("--log-base", default="2", help="Discount log base ('e' allowed).")
@click.option("--tau", type=float, default=0.5, help="Accuracy threshold.")
@click.option("--output", type=click.Path(), default=None, help="JSONL output path.")
@_exit_codes
def cmd_metrics(input_path, kind, k, log_base, tau, output):
    """Evaluate one metric over CSV lists and stream regret reports."""
    spec = MetricSpec(MetricKind(kind), k=k, log_base=_parse_base(log_base), tau=tau)
    lines = []
    count = 0
    for name, labels, scores in iter_instances(input_path):
        count += 1
        try:
            report = metric_regret(spec, labels, scores)
            record = report_record(spec, name, report)
        except (UndefinedMetricError, ValueError) as exc:
            record = report_record(spec, name, None, error=str(exc))
        lines.append(json.dumps(record, sort_keys=True))
    if count == 0:
        click.echo("warning: no instance files found", err=True)
    _write_text(output, "\n".join(lines))


@main.command("bounds")
@click.option("--direction", type=click.Choice(_RANK_DIRECTIONS), required=True)
@click.option("--n", type=int, default=None)
@click.option("--n-pos", type=int, default=None)
@click.option("--n-neg", type=int, default=None)
@click.option("--delta", type=float, default=0.25, help="Classification margin.")
@click.option("--log-base", default="e")
@click.option("--kind", type=click.Choice(_KIND_CHOICES), default="ndcg")
@click.option("--k1", type=int, default=None)
@click.option("--k2", type=int, default=None)
@click.option("--reverse", is_flag=True, help="Shallower-to-deeper truncation marker.")
@click.option("--output", type=click.Path(), default=None)
@_exit_codes
def cmd_bounds(direction, n, n_pos, n_neg, delta, log_base, kind, k1, k2, reverse, output):
    """Closed-form transfer coefficient for one direction."""
    base = _parse_base(log_base)
    if direction == "trunc":
        if None in (k1, k2, n, n_pos):
            raise ValueError("trunc requires --k1, --k2, --n and --n-pos")
        labels = np.array([1] * n_pos + [0] * (n - n_pos))
        mk = MetricKind(kind)
        spec = MetricSpec(mk, k=k1, log_base=base if mk is MetricKind.NDCG else 2.0)
        bound = coeff_truncation(k1, k2, spec, labels, "up" if reverse else "down")
    elif direction in ("auc_to_ndcg", "ndcg_to_auc"):
        if None in (n_pos, n_neg):
            raise ValueError(f"{direction} requires --n-pos and --n-neg")
        maker = coeff_auc_to_ndcg if direction == "auc_to_ndcg" else coeff_ndcg_to_auc
        bound = maker(n_pos, n_neg, base)
    elif direction == "auc_to_acc":
        if None in (n, n_pos):
            raise ValueError("auc_to_acc requires --n and --n-pos")
        bound = coeff_auc_to_acc(n, n_pos, n_neg or (n - n_pos), delta)
    else:
        if None in (n, n_pos):
            raise ValueError("ndcg_to_acc requires --n and --n-pos")
        bound = coeff_ndcg_to_acc(n, delta, base, n_pos)
    _write_text(output, dumps(bound.to_dict()))


@main.command("psi")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("--source", type=click.Choice(_KIND_CHOICES), required=True)
@click.option("--target", type=click.Choice(_KIND_CHOICES), required=True)
@click.option("--source-k", type=int, default=None)
@click.option("--target-k", type=int, default=None)
@click.option("--log-base", default="2")
@click.option("--fmt", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--output", type=click.Path(), default=None)
@_exit_codes
def cmd_psi(input_path, source, target, source_k, target_k, log_base, fmt, output):
    """Brute-force transfer curve for one instance file."""
    base = _parse_base(log_base)
    labels, _scores = read_instance_csv(input_path)
    src = MetricSpec(MetricKind(source), k=source_k, log_base=base)
    tgt = MetricSpec(MetricKind(target), k=target_k, log_base=base)
    curve = psi_brute(src, tgt, labels)
    if fmt == "csv":
        _write_text(output, "\n".join(curve.to_csv_rows()))
    else:
        _write_text(output, dumps(curve.to_dict()))


@main.command("verify")
@click.option("--n-max", type=int, default=7, help="Label-multiset enumeration cap.")
@click.option("--eta-n-max", type=int, default=5, help="Probability-grid cap.")
@click.option(
    "--directions",
    default=None,
    help="Comma-separated check-name prefixes to run (default: all).",
)
@click.option("--output", type=click.Path(), default=None, help="JSON verdict path.")
@_exit_codes
def cmd_verify(n_max, eta_n_max, directions, output):
    """Run the exhaustive property checklist and report one line per check.

    A check passes when its observation matches its expectation; the
    expectation may be a divergence or a documented refutation, in which
    case observing it is the asserted outcome and still exits 0.
    """
    if n_max > 9:
        raise CapacityError(f"exhaustive verification limited to n <= 9, got {n_max}")
    if eta_n_max > 6:
        raise CapacityError(
            f"optimal-set verification limited to n <= 6, got {eta_n_max}"
        )
    results = run_all_checks(n_max=n_max, eta_n_max=eta_n_max)
    if directions:
        prefixes = tuple(p.strip() for p in directions.split(",") if p.strip())
        results = [r for r in results if r.name.startswith(prefixes)]
        if not results:
            raise ValueError(f"no checks match prefixes {prefixes!r}")
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        click.echo(f"[{mark}] {r.name}: expected {r.expectation}, observed {r.observed} ({r.detail})")
        if not r.passed and r.witness:
            click.echo(f"       witness: {json.dumps(r.witness, sort_keys=True)}")
    verdict = {
        "config": {"n_max": n_max, "eta_n_max": eta_n_max},
        "checks": [r.to_dict() for r in results],
        "all_passed": all(r.passed for r in results),
    }
    if output:
        Path(output).write_text(dumps(verdict) + "\n", "utf-8")
    if not verdict["all_passed"]:
        sys.exit(EXIT_CHECK_FAILED)


@main.command("simulate")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--n", type=int, default=None)
@click.option("--snapshots", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--noise-scale", type=float, default=None)
@click.option("--out", "out_dir", type=click.Path(), default="sim_out")
@click.option("--fmt", "fmt", type=click.Choice(["csv", "svg"]), multiple=True)
@_exit_codes
def cmd_simulate(config_path, n, snapshots, seed, noise_scale, out_dir, fmt):
    """Run the regret simulation and write its artifacts.

    Flags override fields of the JSON config document. Always writes
    ``snapshots.csv`` and ``summary.json``; ``--fmt svg`` adds the
    regret-scatter slice.
    """
    data = {}
    if config_path:
        data = json.loads(Path(config_path).read_text("utf-8"))
    for key, value in (
        ("n", n),
        ("snapshots", snapshots),
        ("seed", seed),
        ("noise_scale", noise_scale),
    ):
        if value is not None:
            data[key] = value
    config = SimConfig.from_dict(data)
    result = run_simulation(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_snapshots_csv(out / "snapshots.csv", result)
    write_summary_json(out / "summary.json", result)
    if "svg" in fmt:
        write_scatter_svg(out / "regret_scatter.svg", result)
    click.echo(f"{'loss':10s} {'mean r_acc':>12s} {'mean r_auc':>12s} {'mean r_ndcg':>12s}")
    for loss in config.losses:
        stats = result.summary["per_loss"][loss]
        click.echo(
            f"{loss:10s} {stats['mean_r_acc']:12.5f} "
            f"{stats['mean_r_auc']:12.5f} {stats['mean_r_ndcg']:12.5f}"
        )
    click.echo(f"artifacts written to {out}")


@main.command("rates")
@click.option(
    "--scenario", type=click.Choice(["balanced", "imbalanced"]), required=True
)
@click.option("--grid", default="100,1000,10000,100000,1000000")
@click.option("--delta", type=float, default=0.25)
@click.option("--out", "out_dir", type=click.Path(), default="rates_out")
@_exit_codes
def cmd_rates(scenario, grid, delta, out_dir):
    """Scan transfer coefficients over an n grid; CSV per direction plus fits."""
    n_grid = [int(v) for v in grid.split(",") if v.strip()]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fits = {}
    for direction in ("auc_to_ndcg", "ndcg_to_auc", "auc_to_acc", "ndcg_to_acc"):
        fit = asymptotic_rate_scan(scenario, direction, n_grid, delta=delta)
        fits[direction] = fit.to_dict()
        csv_path = out / f"rates_{scenario}_{direction}.csv"
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write("n,coefficient\n")
            for nn, cc in zip(fit.grid, fit.coefficients):
                fh.write(f"{nn},{cc!r}\n")
        click.echo(
            f"{direction:12s} slope={fit.slope:+.3f} growth~{fit.growth_label} "
            f"spread={fit.ratio_spread:.3f}"
        )
    payload = {
        "config": {"scenario": scenario, "grid": n_grid, "delta": delta},
        "fits": fits,
    }
    (out / "rate_fits.json").write_text(dumps(payload) + "\n", "utf-8")
    click.echo(f"artifacts written to {out}")


if __name__ == "__main__":
    main()
