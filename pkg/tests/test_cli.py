import json

import pytest

from reqclass.cli import main
from reqclass.synthetic import generate_keyword_corpus, write_corpus_csv


@pytest.fixture(scope="module")
def corpus_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "corpus.csv"
    write_corpus_csv(generate_keyword_corpus(30, 24, seed=9), path)
    return path


def test_prep_writes_cache(corpus_csv, tmp_path, capsys):
    out = tmp_path / "cache.jsonl"
    assert main(["prep", "--data", str(corpus_csv), "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 54
    entry = json.loads(lines[0])
    assert set(entry) == {"label", "tokens"}


def test_train_then_eval(corpus_csv, tmp_path, capsys):
    ckpt = tmp_path / "model.ckpt"
    code = main([
        "train", "--data", str(corpus_csv), "--model", "cnn", "--seed", "1",
        "--hidden", "4", "--filters", "3", "--embed-dim", "6",
        "--out", str(ckpt),
    ])
    assert code == 0
    assert ckpt.exists()
    capsys.readouterr()

    assert main(["eval", "--checkpoint", str(ckpt), "--data", str(corpus_csv)]) == 0
    out = capsys.readouterr().out
    assert "precision" in out and "f1" in out


def test_experiment_writes_reports(corpus_csv, tmp_path, capsys):
    out_dir = tmp_path / "run"
    code = main([
        "experiment", "--data", str(corpus_csv), "--reps", "2", "--seed", "2",
        "--batch-size", "16", "--hidden", "4", "--filters", "3",
        "--out", str(out_dir),
    ])
    assert code == 0
    text = (out_dir / "report.txt").read_text()
    assert "Hard voting" in text and "Soft voting" in text
    structured = json.loads((out_dir / "report.json").read_text())
    assert structured["config"]["reps"] == 2
    assert list(structured["modes"]) == ["corpus"]


def test_experiment_uses_config_file(corpus_csv, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        f"data={corpus_csv}\nreps=1\nseed=5\nbatch_size=16\nhidden=4\nfilters=3\n"
        f"out={tmp_path / 'cfg_run'}\n",
        encoding="utf-8",
    )
    assert main(["experiment", "--config", str(cfg)]) == 0
    report = json.loads((tmp_path / "cfg_run" / "report.json").read_text())
    assert report["config"]["seed"] == 5


def test_experiment_rejects_pretrained_without_vectors(corpus_csv, tmp_path, capsys):
    code = main([
        "experiment", "--data", str(corpus_csv), "--mode", "pretrained",
        "--out", str(tmp_path / "x"),
    ])
    assert code == 2
    assert "glove_path" in capsys.readouterr().err


def test_gradcheck_command(capsys):
    assert main(["gradcheck"]) == 0
    out = capsys.readouterr().out
    assert out.count("[ok]") == 5


def test_save_models_writes_checkpoints(corpus_csv, tmp_path):
    out_dir = tmp_path / "ckpts"
    code = main([
        "experiment", "--data", str(corpus_csv), "--reps", "1", "--seed", "2",
        "--batch-size", "16", "--hidden", "4", "--filters", "3",
        "--save-models", "--out", str(out_dir),
    ])
    assert code == 0
    names = {p.name for p in out_dir.glob("*.ckpt")}
    assert names == {f"corpus_rep0_{kind}.ckpt"
                     for kind in ("lstm", "bilstm", "gru", "bigru", "cnn")}
