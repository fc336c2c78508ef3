"""Exception types shared across the package."""

from __future__ import annotations


class UndefinedMetricError(ValueError):
    """A metric is undefined on the given instance (e.g. AUC on a one-class list)."""


class CapacityError(ValueError):
    """An exhaustive computation was requested beyond its instance-size limit."""


class MarginError(ValueError):
    """A conditional probability sits exactly on the decision boundary."""
