"""Mini-batch training of one classifier: Adam on mean binary cross-entropy.

Defaults mirror the experiment protocol: batch size 64, 3 epochs, with the
last 20% of a seeded shuffle held out as a validation set whose loss is
tracked but never used for updates or weight selection (final-epoch weights
are returned).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .autograd import Adam, backward, bce_loss, no_grad
from .models import forward_probs


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch, batch):
        super().__init__(f"non-finite loss at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass
class TrainingConfig:
    batch_size: int = 64
    epochs: int = 3
    validation_split: float = 0.2
    seed: int = 0
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8


@dataclass
class TrainingTrace:
    train_loss: list = field(default_factory=list)
    val_loss: list = field(default_factory=list)
    epoch_seconds: list = field(default_factory=list)


def _mean_loss(ids, labels, params, spec, batch_size):
    total = 0.0
    for start in range(0, len(ids), batch_size):
        chunk = slice(start, start + batch_size)
        with no_grad():
            probs = forward_probs(ids[chunk], params, spec)
            total += float(bce_loss(probs, labels[chunk]).data) * len(ids[chunk])
    return total / len(ids)


def train(spec, params, ids, labels, config):
    """Fit ``params`` in place; returns (params, TrainingTrace).

    ids is an (N, max_len) int array, labels an (N,) array of {0,1} with 1
    for the positive (FR) class. Deterministic in (spec, data, config).
    """
    ids = np.asarray(ids)
    labels = np.asarray(labels, dtype=np.float64)
    n = len(ids)
    if n == 0:
        raise ValueError("cannot train on an empty dataset")

    rng = np.random.default_rng(config.seed)
    order = rng.permutation(n)
    n_val = int(math.floor(config.validation_split * n + 0.5))
    val_idx = order[n - n_val:]
    fit_idx = order[: n - n_val]
    if len(fit_idx) == 0:
        raise ValueError("validation split leaves no training examples")

    adam = Adam(
        params, lr=config.lr, beta1=config.beta1, beta2=config.beta2, epsilon=config.epsilon
    )
    trace = TrainingTrace()
    for epoch in range(config.epochs):
        started = time.perf_counter()
        epoch_order = fit_idx[rng.permutation(len(fit_idx))]
        running = 0.0
        for batch_no, start in enumerate(range(0, len(epoch_order), config.batch_size)):
            batch = epoch_order[start:start + config.batch_size]
            probs = forward_probs(ids[batch], params, spec)
            loss = bce_loss(probs, labels[batch])
            value = float(loss.data)
            if not math.isfinite(value):
                raise DivergenceError(epoch, batch_no)
            backward(loss)
            adam.step()
            adam.zero_grad()
            running += value * len(batch)
        trace.train_loss.append(running / len(epoch_order))
        if len(val_idx):
            trace.val_loss.append(
                _mean_loss(ids[val_idx], labels[val_idx], params, spec, config.batch_size)
            )
        else:
            trace.val_loss.append(float("nan"))
        trace.epoch_seconds.append(time.perf_counter() - started)
    return params, trace
