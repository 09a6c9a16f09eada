"""Command-line entry points.

Subcommands: ``prep`` caches a preprocessed corpus, ``train`` fits a single
model and writes a checkpoint, ``eval`` scores a checkpoint against a CSV,
``experiment`` runs the full repeated protocol and writes report files, and
``gradcheck`` runs the gradient verification suite.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import checkpoint
from .corpus import FR, load_csv
from .embeddings import init_corpus_trained, load_pretrained
from .evaluation import confusion, format_cell, label_from_probability, weighted_metrics
from .experiment import (
    ConfigError,
    parse_config,
    render_report,
    run_experiment,
    write_token_cache,
)
from .models import MODEL_KINDS, ModelSpec, init_parameters, predict
from .textprep import load_stopwords, preprocess
from .training import TrainingConfig, train
from .verification import TOLERANCE, run_gradcheck_suite
from .vocab import Vocabulary, build_vocabulary, encode_corpus, pick_max_len


def _add_experiment_flags(parser):
    parser.add_argument("--config", help="flat key=value configuration file")
    parser.add_argument("--data", help="corpus CSV (text,label) or prep cache (.jsonl)")
    parser.add_argument("--mode", choices=["corpus", "pretrained", "both"])
    parser.add_argument("--glove-path", dest="glove_path")
    parser.add_argument("--reps", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--batch-size", dest="batch_size", type=int)
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--validation-split", dest="validation_split", type=float)
    parser.add_argument("--hidden", type=int)
    parser.add_argument("--filters", type=int)
    parser.add_argument("--test-fraction", dest="test_fraction", type=float)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--fixed-split", action="store_true",
                        help="reuse one split across repetitions (vary init only)")
    parser.add_argument("--save-models", action="store_true",
                        help="write per-model checkpoints into the output directory")
    parser.add_argument("--stopwords", help="override the bundled stopword list")
    parser.add_argument("--out")


def _overrides_from(args):
    keys = ("data", "mode", "glove_path", "reps", "seed", "batch_size", "epochs",
            "validation_split", "hidden", "filters", "test_fraction", "workers",
            "stopwords", "out")
    overrides = {key: getattr(args, key, None) for key in keys}
    if getattr(args, "fixed_split", False):
        overrides["resplit_each_rep"] = False
    if getattr(args, "save_models", False):
        overrides["save_models"] = True
    return overrides


def cmd_prep(args):
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    records = load_csv(args.data)
    tokens = [preprocess(r.text, stopwords) for r in records]
    labels = [r.label for r in records]
    write_token_cache(args.out, tokens, labels)
    print(f"cached {len(records)} preprocessed records to {args.out}")
    return 0


def cmd_train(args):
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    records = load_csv(args.data)
    tokens = [preprocess(r.text, stopwords) for r in records]
    labels = np.array([1.0 if r.label == FR else 0.0 for r in records])
    vocab = build_vocabulary(tokens)
    max_len = pick_max_len(tokens, cap=args.max_len_cap, floor=args.conv_width)
    spec = ModelSpec(
        kind=args.model,
        max_len=max_len,
        hidden=args.hidden,
        conv_filters=args.filters,
        conv_width=args.conv_width,
        embedding_mode=args.mode,
    )
    if args.mode == "pretrained":
        if not args.glove_path:
            print("error: --glove-path is required for pretrained mode", file=sys.stderr)
            return 2
        table = load_pretrained(args.glove_path, vocab)
    else:
        table = init_corpus_trained(vocab, args.embed_dim, seed=args.seed)
    params = init_parameters(spec, table, seed=args.seed)
    config = TrainingConfig(
        batch_size=args.batch_size, epochs=args.epochs,
        validation_split=args.validation_split, seed=args.seed,
    )
    ids = encode_corpus(tokens, vocab, max_len)
    params, trace = train(spec, params, ids, labels, config)
    for epoch, (tl, vl, sec) in enumerate(
        zip(trace.train_loss, trace.val_loss, trace.epoch_seconds)
    ):
        print(f"epoch {epoch}: train loss {tl:.4f}, validation loss {vl:.4f} ({sec:.1f}s)")
    checkpoint.save(args.out, spec, params, dict(vocab.id_of))
    print(f"saved checkpoint to {args.out}")
    return 0


def cmd_eval(args):
    spec, params, vocab_id_of, _ = checkpoint.load(args.checkpoint)
    stopwords = load_stopwords(args.stopwords) if args.stopwords else None
    records = load_csv(args.data)
    tokens = [preprocess(r.text, stopwords) for r in records]
    vocab = Vocabulary(id_of=vocab_id_of, size=len(vocab_id_of) + 2)
    ids = encode_corpus(tokens, vocab, spec.max_len)
    probs = predict(ids, params, spec)
    predicted = [label_from_probability(p) for p in probs]
    metrics = weighted_metrics(confusion(predicted, [r.label for r in records]))
    print(f"precision {format_cell(metrics.precision)}  "
          f"recall {format_cell(metrics.recall)}  "
          f"f1 {format_cell(metrics.f1)}  (weighted, n/a = single run)")
    return 0


def cmd_experiment(args):
    try:
        config = parse_config(args.config, _overrides_from(args))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if not config.data:
        print("configuration error: no data file given", file=sys.stderr)
        return 2
    report = run_experiment(config, log=lambda msg: print(msg, file=sys.stderr))
    os.makedirs(config.out, exist_ok=True)
    text = render_report(report, "text")
    with open(os.path.join(config.out, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(text)
    with open(os.path.join(config.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(render_report(report, "structured"))
    print(text)
    all_complete = all(
        not payload["repetitions"][r]["failures"]
        for payload in report["modes"].values()
        for r in range(len(payload["repetitions"]))
    )
    return 0 if all_complete else 1


def cmd_gradcheck(args):
    errors = run_gradcheck_suite(seed=args.seed)
    worst = max(errors.values())
    for kind, err in errors.items():
        status = "ok" if err < TOLERANCE else "FAIL"
        print(f"{kind:<8} max relative gradient error {err:.3e}  [{status}]")
    print(f"worst {worst:.3e} (tolerance {TOLERANCE:.0e})")
    return 0 if worst < TOLERANCE else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="reqclass",
        description="FR/NFR requirement classification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="cache a preprocessed corpus")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stopwords")
    p.set_defaults(fn=cmd_prep)

    p = sub.add_parser("train", help="train one model and write a checkpoint")
    p.add_argument("--data", required=True)
    p.add_argument("--model", choices=list(MODEL_KINDS), required=True)
    p.add_argument("--mode", choices=["corpus", "pretrained"], default="corpus")
    p.add_argument("--glove-path", dest="glove_path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-size", dest="batch_size", type=int, default=64)
    p.add_argument("--epochs", type=int, default=3)
    p.add_argument("--validation-split", dest="validation_split", type=float, default=0.2)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--filters", type=int, default=128)
    p.add_argument("--conv-width", dest="conv_width", type=int, default=5)
    p.add_argument("--embed-dim", dest="embed_dim", type=int, default=100)
    p.add_argument("--max-len-cap", dest="max_len_cap", type=int, default=100)
    p.add_argument("--stopwords")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint against a labeled CSV")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--stopwords")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("experiment", help="run the repeated multi-model protocol")
    _add_experiment_flags(p)
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("gradcheck", help="finite-difference gradient verification")
    p.add_argument("--seed", type=int, default=5)
    p.set_defaults(fn=cmd_gradcheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
