#!/usr/bin/env python3
"""Loading a labeled requirements corpus and splitting it for experiments.

The corpus contract is a two-column CSV (text,label) with FR / NFR labels.
Here we generate a small synthetic corpus, write it to disk, load it back,
and take a stratified 80/20 split.
"""

import tempfile
from pathlib import Path

from reqclass import class_summary, load_csv, stratified_split
from reqclass.synthetic import generate_keyword_corpus, write_corpus_csv

workdir = Path(tempfile.mkdtemp(prefix="reqclass_demo_"))
csv_path = workdir / "requirements.csv"

records = generate_keyword_corpus(n_fr=60, n_nfr=45, seed=7)
write_corpus_csv(records, csv_path)
print(f"wrote {csv_path}")

# Load through the CSV contract: quoted texts may span multiple lines.
records = load_csv(csv_path)
print("first record:", records[0])

summary = class_summary(records)
print("summary:", summary)

# Stratified split: each class contributes round(fraction * count) test rows,
# so the FR/NFR imbalance is preserved on both sides.
split = stratified_split(records, test_fraction=0.2, seed=0)
print("train:", class_summary(split.train))
print("test: ", class_summary(split.test))

# The split is a pure function of (records, fraction, seed).
again = stratified_split(records, test_fraction=0.2, seed=0)
assert again.test == split.test
print("same seed, same membership: ok")
