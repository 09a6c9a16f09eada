"""Precision / recall / F-score on the test partition, support-weighted over
the two classes, plus mean(std) aggregation across repeated runs and the
``MM.MM(S.SS)`` cell formatting used in the result tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

from .corpus import FR, LABELS, NFR

DECISION_THRESHOLD = 0.5  # probability >= 0.5 reads as FR


class InsufficientDataError(ValueError):
    """Aggregation needs at least two repetition values."""


@dataclass
class ConfusionCounts:
    tp: dict
    fp: dict
    fn: dict
    support: dict
    total: int


@dataclass
class MetricsReport:
    precision: float  # percentages in [0, 100]
    recall: float
    f1: float


@dataclass
class AggregateCell:
    mean: float
    std: float  # sample standard deviation (n-1 divisor)


def label_from_probability(p, threshold=DECISION_THRESHOLD):
    return FR if p >= threshold else NFR


def confusion(predictions, truths):
    if len(predictions) != len(truths):
        raise ValueError(
            f"length mismatch: {len(predictions)} predictions vs {len(truths)} truths"
        )
    if not truths:
        raise ValueError("confusion needs at least one example")
    tp = {label: 0 for label in LABELS}
    fp = {label: 0 for label in LABELS}
    fn = {label: 0 for label in LABELS}
    support = {label: 0 for label in LABELS}
    for predicted, actual in zip(predictions, truths):
        support[actual] += 1
        if predicted == actual:
            tp[actual] += 1
        else:
            fp[predicted] += 1
            fn[actual] += 1
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, support=support, total=len(truths))


def _ratio(numerator, denominator):
    return numerator / denominator if denominator else 0.0


def weighted_metrics(counts):
    """Support-weighted P/R/F1 over both classes, scaled to percentages."""
    precision = recall = f1 = 0.0
    for label in LABELS:
        weight = counts.support[label] / counts.total
        p = _ratio(counts.tp[label], counts.tp[label] + counts.fp[label])
        r = _ratio(counts.tp[label], counts.tp[label] + counts.fn[label])
        f = _ratio(2.0 * p * r, p + r)
        precision += weight * p
        recall += weight * r
        f1 += weight * f
    return MetricsReport(precision=100.0 * precision, recall=100.0 * recall, f1=100.0 * f1)


def aggregate(values):
    """Arithmetic mean and sample standard deviation of repetition scores."""
    if len(values) < 2:
        raise InsufficientDataError(f"need at least 2 values, got {len(values)}")
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return AggregateCell(mean=mean, std=math.sqrt(var))


def _two_decimals(value):
    # Decimal sees the shortest round-trip repr, so 1.335 rounds on its
    # decimal value (-> 1.34 under half-even) rather than on float bits.
    return Decimal(repr(float(value))).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)


def format_cell(mean, std=None):
    """Render one table cell as MM.MM(S.SS); std of None renders as n/a."""
    if std is None:
        return f"{_two_decimals(mean)}(n/a)"
    return f"{_two_decimals(mean)}({_two_decimals(std)})"
