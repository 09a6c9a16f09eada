#!/usr/bin/env python3
"""Vocabulary construction, fixed-length encoding, and the two embedding modes.

Ids 0 and 1 are reserved (padding, out-of-vocabulary); corpus tokens are
ranked by frequency. Sequences are pre-padded so the informative tokens sit
at the end, which is what the recurrent models read last. Embeddings are
either trained with the classifier (random init) or loaded frozen from a
GloVe-style vector file.
"""

import tempfile
from pathlib import Path

from reqclass import build_vocabulary, encode
from reqclass.embeddings import init_corpus_trained, load_pretrained
from reqclass.synthetic import write_vector_file

train_sequences = [
    ["system", "provid", "consol"],
    ["system", "respons", "fast"],
    ["export", "provid", "data"],
]
vocab = build_vocabulary(train_sequences)
print("vocabulary:", vocab.id_of)

print("encode short:", encode(["system", "fast"], vocab, max_len=6).tolist())
print("encode unseen:", encode(["mystery"], vocab, max_len=4).tolist())
print("encode long: ", encode(["a"] * 2 + ["system"] * 7, vocab, max_len=5).tolist())
print()

table = init_corpus_trained(vocab, dim=8, seed=0)
print(f"corpus-trained table: shape {table.matrix.shape}, trainable={table.trainable}")
print("pad row is zero:", not table.matrix[0].any())

workdir = Path(tempfile.mkdtemp(prefix="reqclass_demo_"))
vector_path = workdir / "vectors.txt"
write_vector_file(sorted(vocab.id_of), dim=8, seed=1, path=vector_path)
frozen = load_pretrained(vector_path, vocab)
print(f"pretrained table: shape {frozen.matrix.shape}, trainable={frozen.trainable}")
