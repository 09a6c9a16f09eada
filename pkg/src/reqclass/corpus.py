"""Load, validate, summarize and split the labeled requirements dataset.

The on-disk contract is a UTF-8, RFC-4180 CSV with a ``text,label`` header;
labels are FR / NFR (case-insensitive), texts may span multiple lines when
quoted. Records are immutable once loaded and safe to share.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

FR = "FR"
NFR = "NFR"
LABELS = (FR, NFR)


class CorpusSchemaError(ValueError):
    """The CSV header does not expose the required columns."""


class RecordError(ValueError):
    """A data row is unusable; the message cites the offending line."""


class DegenerateClassError(ValueError):
    """A split was requested over a corpus missing one of the classes."""


@dataclass(frozen=True)
class RequirementRecord:
    text: str
    label: str


@dataclass
class DatasetSplit:
    train: list
    test: list
    validation_fraction: float = 0.2  # share of train held out while fitting


def load_csv(path):
    """Records in file order; labels parsed case-insensitively."""
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return records
        missing = {"text", "label"} - set(reader.fieldnames)
        if missing:
            raise CorpusSchemaError(
                f"{path}: header must name the 'text' and 'label' columns, "
                f"missing {sorted(missing)}"
            )
        for row in reader:
            line = reader.line_num
            raw_label = (row["label"] or "").strip().upper()
            if raw_label not in LABELS:
                raise RecordError(f"{path} line {line}: unknown label {row['label']!r}")
            text = (row["text"] or "").strip()
            if not text:
                raise RecordError(f"{path} line {line}: empty requirement text")
            records.append(RequirementRecord(text=text, label=raw_label))
    return records


def class_summary(records):
    counts = {FR: 0, NFR: 0}
    for record in records:
        counts[record.label] += 1
    return {"total": len(records), "per_class": counts}


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def split_indices(labels, test_fraction, seed):
    """Index-level stratified split; returns sorted (train, test) index lists."""
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    by_class = {label: [] for label in LABELS}
    for index, label in enumerate(labels):
        by_class[label].append(index)
    for label in LABELS:
        if not by_class[label]:
            raise DegenerateClassError(f"no {label} records to split")

    rng = np.random.default_rng(seed)
    test_set = set()
    for label in LABELS:
        indices = np.array(by_class[label])
        n_test = _round_half_up(test_fraction * len(indices))
        chosen = rng.permutation(len(indices))[:n_test]
        test_set.update(indices[chosen].tolist())
    train = [i for i in range(len(labels)) if i not in test_set]
    test = sorted(test_set)
    return train, test


def stratified_split(records, test_fraction, seed):
    """Per-class seeded split; test gets round(fraction * class size) records.

    Pure in (records, test_fraction, seed); both partitions preserve the
    original record order.
    """
    train_idx, test_idx = split_indices([r.label for r in records], test_fraction, seed)
    return DatasetSplit(
        train=[records[i] for i in train_idx],
        test=[records[i] for i in test_idx],
    )
