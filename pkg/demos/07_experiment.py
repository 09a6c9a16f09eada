#!/usr/bin/env python3
"""The full repeated protocol at demo scale: both embedding modes, the five
models plus the two voting ensembles, repeated with derived seeds, and the
mean(std) report tables.

Scaled down to run in about a minute; the real run uses reps=10 and the
default model sizes (see README or `reqclass experiment --help`).
"""

import tempfile
from pathlib import Path

from reqclass import parse_config, render_report, run_experiment
from reqclass.synthetic import generate_keyword_corpus, write_corpus_csv, write_vector_file
from reqclass.textprep import preprocess

workdir = Path(tempfile.mkdtemp(prefix="reqclass_demo_"))
records = generate_keyword_corpus(n_fr=220, n_nfr=180, seed=12)
csv_path = workdir / "requirements.csv"
write_corpus_csv(records, csv_path)

tokens = sorted({t for r in records for t in preprocess(r.text)})
vector_path = workdir / "vectors.txt"
write_vector_file(tokens, dim=20, seed=0, path=vector_path)

config = parse_config(None, {
    "data": str(csv_path),
    "mode": "both",
    "glove_path": str(vector_path),
    "reps": 3,
    "seed": 0,
    "batch_size": 16,
    "hidden": 16,
    "filters": 16,
    "embed_dim": 20,
    "out": str(workdir / "run"),
})

report = run_experiment(config, log=print)
print()
print(render_report(report, "text"))

out_path = workdir / "report.json"
out_path.write_text(render_report(report, "structured"), encoding="utf-8")
print(f"structured report written to {out_path}")
