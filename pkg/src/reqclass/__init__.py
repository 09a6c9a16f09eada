"""reqclass: classify software requirements as functional / non-functional.

A self-contained toolkit: CSV corpus handling, Porter-stemmed text
preprocessing, trainable or frozen word embeddings, five from-scratch
sequence classifiers (LSTM, BiLSTM, GRU, BiGRU, CNN) on a taped
reverse-mode autograd core, hard/soft voting ensembles, and a repeated
experiment runner that reports mean(std) precision / recall / F-score.
"""

from .corpus import (
    FR,
    NFR,
    DatasetSplit,
    RequirementRecord,
    class_summary,
    load_csv,
    stratified_split,
)
from .embeddings import EmbeddingTable, init_corpus_trained, load_pretrained
from .evaluation import (
    AggregateCell,
    ConfusionCounts,
    MetricsReport,
    aggregate,
    confusion,
    format_cell,
    weighted_metrics,
)
from .experiment import ExperimentConfig, parse_config, render_report, run_experiment
from .models import ModelSpec, predict, run_sequence
from .textprep import normalize_text, preprocess, remove_stopwords, stem_token
from .training import TrainingConfig, TrainingTrace, train
from .vocab import Vocabulary, build_vocabulary, encode
from .voting import hard_vote, soft_vote

__version__ = "0.1.0"
