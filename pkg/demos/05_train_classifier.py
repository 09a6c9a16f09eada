#!/usr/bin/env python3
"""Training one classifier end to end on a separable synthetic corpus.

The protocol: 80/20 stratified split, vocabulary from the training side
only, pre-padded encodings, then 3 epochs of Adam on mean binary
cross-entropy with batch 64 and a 20% validation holdout.
"""

import numpy as np

from reqclass import build_vocabulary, train
from reqclass.corpus import FR, split_indices
from reqclass.embeddings import init_corpus_trained
from reqclass.evaluation import confusion, label_from_probability, weighted_metrics
from reqclass.models import ModelSpec, init_parameters, predict
from reqclass.synthetic import generate_keyword_corpus
from reqclass.textprep import preprocess
from reqclass.training import TrainingConfig
from reqclass.vocab import encode_corpus, pick_max_len

records = generate_keyword_corpus(n_fr=150, n_nfr=120, seed=3)
tokens = [preprocess(r.text) for r in records]
labels = [r.label for r in records]
y = np.array([1.0 if label == FR else 0.0 for label in labels])

train_idx, test_idx = split_indices(labels, test_fraction=0.2, seed=0)
train_tokens = [tokens[i] for i in train_idx]
vocab = build_vocabulary(train_tokens)
max_len = pick_max_len(train_tokens, cap=100, floor=5)
print(f"{len(train_idx)} train / {len(test_idx)} test, vocab {vocab.size}, max_len {max_len}")

train_ids = encode_corpus(train_tokens, vocab, max_len)
test_ids = encode_corpus([tokens[i] for i in test_idx], vocab, max_len)

spec = ModelSpec(kind="lstm", max_len=max_len)
table = init_corpus_trained(vocab, dim=100, seed=1)
params = init_parameters(spec, table, seed=1)

params, trace = train(spec, params, train_ids, y[train_idx], TrainingConfig(seed=1))
for epoch, (tl, vl) in enumerate(zip(trace.train_loss, trace.val_loss)):
    print(f"epoch {epoch}: train loss {tl:.4f}, validation loss {vl:.4f}")

probs = predict(test_ids, params, spec)
predicted = [label_from_probability(p) for p in probs]
metrics = weighted_metrics(confusion(predicted, [labels[i] for i in test_idx]))
print(f"test precision {metrics.precision:.2f}, recall {metrics.recall:.2f}, "
      f"F-score {metrics.f1:.2f}")
