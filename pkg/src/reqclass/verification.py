"""Gradient verification at toy scale for all five architectures.

Central finite differences against the taped analytic gradients, probing
every parameter entry including the embedding rows. Sizes are deliberately
tiny (vocab 20, embedding 4, hidden 5, sequence 6, CNN 3 filters of width 2)
so the whole suite runs in seconds.
"""

from __future__ import annotations

import numpy as np

from .autograd import bce_loss, gradient_check
from .embeddings import CORPUS_TRAINED, EmbeddingTable
from .models import MODEL_KINDS, ModelSpec, forward_probs, init_parameters

TOY_VOCAB = 20
TOY_DIM = 4
TOY_HIDDEN = 5
TOY_MAX_LEN = 6
TOY_FILTERS = 3
TOY_CONV_WIDTH = 2
TOLERANCE = 1e-4


def toy_spec(kind):
    return ModelSpec(
        kind=kind,
        max_len=TOY_MAX_LEN,
        hidden=TOY_HIDDEN,
        conv_filters=TOY_FILTERS,
        conv_width=TOY_CONV_WIDTH,
    )


def toy_model(kind, seed):
    rng = np.random.default_rng(seed)
    matrix = np.zeros((TOY_VOCAB, TOY_DIM))
    matrix[1:] = rng.uniform(-0.5, 0.5, size=(TOY_VOCAB - 1, TOY_DIM))
    table = EmbeddingTable(matrix=matrix, dim=TOY_DIM, mode=CORPUS_TRAINED, trainable=True)
    spec = toy_spec(kind)
    params = init_parameters(spec, table, seed=seed + 1)
    # Ids start at 1: the pad row is frozen by construction (its gradient is
    # masked), so probing it with finite differences would be meaningless.
    ids = rng.integers(1, TOY_VOCAB, size=(3, TOY_MAX_LEN))
    labels = rng.integers(0, 2, size=3).astype(np.float64)
    return spec, params, ids, labels


def check_architecture(kind, seed=5):
    """Max relative gradient error for one architecture at toy size."""
    spec, params, ids, labels = toy_model(kind, seed)

    def forward():
        return bce_loss(forward_probs(ids, params, spec), labels)

    return gradient_check(forward, params)


def run_gradcheck_suite(seed=5):
    """Gradient errors for every architecture, keyed by kind."""
    return {kind: check_architecture(kind, seed) for kind in MODEL_KINDS}
