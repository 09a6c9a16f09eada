"""Synthetic labeled corpora for demos, benchmarks and end-to-end tests.

The generator builds a linearly separable two-class corpus: FR texts draw
from a pool of action keywords, NFR texts from a pool of quality keywords,
plus a few shared filler nouns. The class pools stay disjoint after
stemming, so any of the classifiers can in principle reach near-perfect
scores on it.
"""

from __future__ import annotations

import csv

import numpy as np

from .corpus import FR, NFR, RequirementRecord

FR_KEYWORDS = (
    "export", "import", "create", "delete", "update", "search", "login",
    "register", "upload", "download", "print", "sort", "filter", "display",
    "submit", "validate", "calculate", "generate", "assign", "schedule",
)
NFR_KEYWORDS = (
    "fast", "reliable", "secure", "scalable", "portable", "usable",
    "available", "maintainable", "efficient", "robust", "stable",
    "responsive", "durable", "compliant", "recoverable", "auditable",
    "encrypted", "redundant", "accessible", "resilient",
)
FILLERS = ("system", "software", "user", "data", "service", "module", "interface")


def _sentence(rng, pool, min_len, max_len, n_fillers):
    n_keywords = int(rng.integers(min_len, max_len + 1))
    words = list(rng.choice(pool, size=n_keywords, replace=True))
    words += list(rng.choice(FILLERS, size=n_fillers, replace=True))
    rng.shuffle(words)
    return "The " + " ".join(words) + "."


def generate_keyword_corpus(n_fr, n_nfr, seed, min_len=6, max_len=14, n_fillers=2):
    """Deterministic separable corpus with the requested class counts."""
    rng = np.random.default_rng(seed)
    records = []
    for _ in range(n_fr):
        records.append(RequirementRecord(_sentence(rng, FR_KEYWORDS, min_len, max_len, n_fillers), FR))
    for _ in range(n_nfr):
        records.append(RequirementRecord(_sentence(rng, NFR_KEYWORDS, min_len, max_len, n_fillers), NFR))
    order = rng.permutation(len(records))
    return [records[i] for i in order]


def write_corpus_csv(records, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "label"])
        for record in records:
            writer.writerow([record.text, record.label])


def write_vector_file(tokens, dim, seed, path):
    """GloVe-style text file with random vectors for the given tokens."""
    rng = np.random.default_rng(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for token in tokens:
            vec = rng.normal(0.0, 0.4, size=dim)
            fh.write(token + " " + " ".join(f"{x:.5f}" for x in vec) + "\n")
