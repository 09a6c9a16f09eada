"""Vocabulary construction and fixed-length integer encoding.

Ids 0 and 1 are reserved for padding and out-of-vocabulary tokens; corpus
tokens start at 2, ranked by descending frequency with lexicographic
tie-breaks so the mapping is deterministic. The vocabulary must be built
from the training partition only.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

PAD_ID = 0
OOV_ID = 1
PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"


@dataclass(frozen=True)
class Vocabulary:
    id_of: dict[str, int]
    size: int

    def token_of(self, token_id):
        if token_id == PAD_ID:
            return PAD_TOKEN
        if token_id == OOV_ID:
            return OOV_TOKEN
        for token, tid in self.id_of.items():
            if tid == token_id:
                return token
        raise KeyError(token_id)

    def inverse(self):
        table = {tid: token for token, tid in self.id_of.items()}
        table[PAD_ID] = PAD_TOKEN
        table[OOV_ID] = OOV_TOKEN
        return table


def build_vocabulary(train_sequences):
    """Frequency-ranked vocabulary over preprocessed training sequences."""
    counts = Counter()
    for tokens in train_sequences:
        counts.update(tokens)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    id_of = {token: index + 2 for index, (token, _) in enumerate(ranked)}
    return Vocabulary(id_of=id_of, size=len(id_of) + 2)


def encode(tokens, vocab, max_len):
    """Integer-encode with pre-padding; overlong sequences keep the tail.

    Unknown tokens map to OOV_ID, short sequences are left-padded with
    PAD_ID so the informative tokens sit at the end of the window.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    ids = [vocab.id_of.get(token, OOV_ID) for token in tokens[-max_len:]]
    out = np.zeros(max_len, dtype=np.int64)
    if ids:
        out[max_len - len(ids):] = ids
    return out


def encode_corpus(sequences, vocab, max_len):
    return np.stack([encode(tokens, vocab, max_len) for tokens in sequences])


def pick_max_len(train_sequences, cap=100, floor=1):
    """95th-percentile training length, capped; short corpora keep a floor."""
    lengths = sorted(len(tokens) for tokens in train_sequences)
    if not lengths:
        return floor
    index = max(0, -(-95 * len(lengths) // 100) - 1)  # ceil(0.95 n) - 1
    chosen = lengths[index]
    return max(floor, min(cap, chosen))
