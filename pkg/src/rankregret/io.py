"""Reading instance files and serializing reports.

An instance file is a CSV with header ``label,score`` and one row per
item; a directory of such files is a multi-list corpus (files are
processed in sorted name order). Reports serialize as JSON-friendly
dicts with deterministic key order.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .metrics import MetricSpec, RegretReport

__all__ = ["InputError", "read_instance_csv", "iter_instances", "report_record", "dumps"]


class InputError(ValueError):
    """Malformed instance input, carrying file and line diagnostics."""

    def __init__(self, path, line: int | None, message: str) -> None:
        where = f"{path}" if line is None else f"{path}:{line}"
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line


def read_instance_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Parse one ``label,score`` file into label and score vectors."""
    labels: list[int] = []
    scores: list[float] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise InputError(path, None, "empty file")
        if [c.strip().lower() for c in header] != ["label", "score"]:
            raise InputError(path, 1, f"expected header 'label,score', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise InputError(path, lineno, f"expected 2 fields, got {len(row)}")
            try:
                label = int(row[0])
                score = float(row[1])
            except ValueError as exc:
                raise InputError(path, lineno, str(exc)) from exc
            if label not in (0, 1):
                raise InputError(path, lineno, f"label must be 0 or 1, got {label}")
            if not np.isfinite(score):
                raise InputError(path, lineno, f"score must be finite, got {score}")
            labels.append(label)
            scores.append(score)
    if not labels:
        raise InputError(path, None, "no data rows")
    return np.array(labels, dtype=np.int64), np.array(scores, dtype=np.float64)


def iter_instances(path):
    """Yield (name, labels, scores) from a file or a directory of files."""
    p = Path(path)
    if p.is_dir():
        for child in sorted(p.iterdir()):
            if child.is_file() and child.suffix.lower() == ".csv":
                labels, scores = read_instance_csv(child)
                yield str(child), labels, scores
    else:
        labels, scores = read_instance_csv(p)
        yield str(p), labels, scores


def report_record(
    spec: MetricSpec, name: str, report: RegretReport | None, error: str | None = None
) -> dict:
    """One JSON record per evaluated list; errors become error records."""
    record: dict = {
        "list": name,
        "metric": spec.label(),
        "log_base": spec.log_base,
        "tau": spec.tau,
    }
    if error is not None:
        record["error"] = error
    else:
        record.update(report.to_dict())
    return record


def dumps(obj) -> str:
    """Deterministic JSON encoding used for all CLI outputs."""
    return json.dumps(obj, sort_keys=True, indent=2)
