"""Embedding tables: corpus-trained (random init, updated with the model)
or static vectors loaded from a GloVe-style text file and frozen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vocab import OOV_ID, PAD_ID

CORPUS_TRAINED = "corpus"
PRETRAINED_STATIC = "pretrained"
INIT_RANGE = 0.05
PRETRAINED_DIM = 300  # width of the released GloVe vectors


class VectorFileError(ValueError):
    """A pretrained-vector file line could not be parsed."""


@dataclass
class EmbeddingTable:
    matrix: np.ndarray  # (vocab size, dim), float64; row 0 is the zero pad row
    dim: int
    mode: str
    trainable: bool


def corpus_matrix(vocab_size, dim, seed):
    """Uniform random rows in [-INIT_RANGE, INIT_RANGE]; pad row stays zero."""
    rng = np.random.default_rng(seed)
    matrix = np.zeros((vocab_size, dim))
    matrix[1:] = rng.uniform(-INIT_RANGE, INIT_RANGE, size=(vocab_size - 1, dim))
    return matrix


def init_corpus_trained(vocab, dim, seed):
    """Trainable embedding table randomly initialized for a vocabulary."""
    if dim < 1:
        raise ValueError("embedding dim must be >= 1")
    return EmbeddingTable(
        matrix=corpus_matrix(vocab.size, dim, seed),
        dim=dim, mode=CORPUS_TRAINED, trainable=True,
    )


def parse_vector_file(path, keep=None):
    """Read `token v1 .. v_dim` lines; returns (vectors dict, dim).

    ``keep`` restricts the returned dict to a token set, which keeps memory
    sane for full-size released files. Dimension mismatches and unparsable
    floats raise VectorFileError with the offending line number.
    """
    vectors = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.rstrip("\n").split(" ")
            if parts == [""]:
                continue
            token, raw = parts[0], parts[1:]
            if dim is None:
                dim = len(raw)
                if dim == 0:
                    raise VectorFileError(f"line {line_no}: no vector components")
            elif len(raw) != dim:
                raise VectorFileError(
                    f"line {line_no}: expected {dim} components, found {len(raw)}"
                )
            if keep is not None and token not in keep:
                continue
            try:
                vectors[token] = np.array([float(x) for x in raw])
            except ValueError as exc:
                raise VectorFileError(f"line {line_no}: {exc}") from None
    if dim is None:
        raise VectorFileError("vector file is empty")
    return vectors, dim


def table_from_vectors(vectors, dim, vocab):
    """Assemble a frozen table; tokens missing from ``vectors`` get zero rows."""
    matrix = np.zeros((vocab.size, dim))
    for token, token_id in vocab.id_of.items():
        vec = vectors.get(token)
        if vec is not None:
            matrix[token_id] = vec
    # PAD_ID and OOV_ID rows stay zero by construction.
    assert not matrix[PAD_ID].any() and not matrix[OOV_ID].any()
    return EmbeddingTable(matrix=matrix, dim=dim, mode=PRETRAINED_STATIC, trainable=False)


def load_pretrained(path, vocab):
    """Frozen embedding table with vectors from a GloVe-style file."""
    vectors, dim = parse_vector_file(path, keep=set(vocab.id_of))
    return table_from_vectors(vectors, dim, vocab)
