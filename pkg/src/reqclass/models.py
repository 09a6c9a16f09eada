"""The five sequence classifiers: LSTM, BiLSTM, GRU, BiGRU and a 1-D CNN.

Every model maps a fixed-length id sequence through an embedding table and a
feature extractor to a single sigmoid probability of the positive (FR) class.

Parameter shape table (d = embedding dim, H = hidden units, V = vocabulary
size, w = conv window, F = conv filters):

    all kinds      embedding      (V, d)
    lstm           lstm.Wx        (d, 4H)   gate blocks [i | f | g | o]
                   lstm.Wh        (H, 4H)
                   lstm.b         (4H,)     forget block initialized to 1.0
    bilstm         fwd.Wx/Wh/b and bwd.Wx/Wh/b, shapes as lstm
    gru            gru.Wx         (d, 3H)   gate blocks [z | r | n]
                   gru.Wh         (H, 3H)
                   gru.b          (3H,)
    bigru          fwd.* and bwd.*, shapes as gru
    cnn            conv.W         (w*d, F)
                   conv.b         (F,)
    all kinds      out.w          (feature width, 1)
                   out.b          (1,)

Feature widths: H for lstm/gru, 2H for the bidirectional kinds (forward and
backward final states concatenated), F for cnn (global max over time).
Weights are Glorot-uniform, biases zero except the LSTM forget gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autograd import (
    ShapeError,
    Tensor,
    concat_last,
    embedding_lookup,
    matmul,
    max_over_time,
    mul,
    no_grad,
    relu,
    reshape,
    sigmoid,
    slice_last,
    slice_time,
    sub,
    tanh,
    window_cols,
)
from .vocab import PAD_ID

MODEL_KINDS = ("lstm", "bilstm", "gru", "bigru", "cnn")
MODEL_LABELS = {
    "lstm": "LSTM",
    "bilstm": "BiLSTM",
    "gru": "GRU",
    "bigru": "BiGRU",
    "cnn": "CNN",
}


@dataclass
class ModelSpec:
    """Architecture choice plus the dimensions that fix every tensor shape."""

    kind: str
    max_len: int
    hidden: int = 64
    conv_filters: int = 128
    conv_width: int = 5
    embedding_mode: str = "corpus"

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}, expected one of {MODEL_KINDS}")
        if self.hidden < 1:
            raise ValueError("hidden must be >= 1")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.kind == "cnn" and self.max_len < self.conv_width:
            raise ValueError(
                f"max_len {self.max_len} shorter than conv window {self.conv_width}"
            )

    def feature_width(self):
        if self.kind in ("lstm", "gru"):
            return self.hidden
        if self.kind in ("bilstm", "bigru"):
            return 2 * self.hidden
        return self.conv_filters


def _glorot(rng, shape):
    limit = np.sqrt(6.0 / (shape[0] + shape[1]))
    return rng.uniform(-limit, limit, size=shape)


def _recurrent_block(rng, prefix, dim, hidden, gates, forget_block=None):
    wide = gates * hidden
    b = np.zeros(wide)
    if forget_block is not None:
        b[forget_block * hidden:(forget_block + 1) * hidden] = 1.0
    return {
        f"{prefix}.Wx": _glorot(rng, (dim, wide)),
        f"{prefix}.Wh": _glorot(rng, (hidden, wide)),
        f"{prefix}.b": b,
    }


def init_parameters(spec, embedding, seed):
    """Build the named parameter dict for ``spec`` around an embedding table.

    The embedding matrix becomes a trainable tensor only when the table says
    so (corpus-trained mode); pretrained tables stay frozen.
    """
    rng = np.random.default_rng(seed)
    arrays = {}
    d = embedding.dim
    h = spec.hidden
    if spec.kind == "lstm":
        arrays.update(_recurrent_block(rng, "lstm", d, h, 4, forget_block=1))
    elif spec.kind == "bilstm":
        arrays.update(_recurrent_block(rng, "fwd", d, h, 4, forget_block=1))
        arrays.update(_recurrent_block(rng, "bwd", d, h, 4, forget_block=1))
    elif spec.kind == "gru":
        arrays.update(_recurrent_block(rng, "gru", d, h, 3))
    elif spec.kind == "bigru":
        arrays.update(_recurrent_block(rng, "fwd", d, h, 3))
        arrays.update(_recurrent_block(rng, "bwd", d, h, 3))
    else:
        arrays["conv.W"] = _glorot(rng, (spec.conv_width * d, spec.conv_filters))
        arrays["conv.b"] = np.zeros(spec.conv_filters)
    arrays["out.w"] = _glorot(rng, (spec.feature_width(), 1))
    arrays["out.b"] = np.zeros(1)

    params = {"embedding": Tensor(embedding.matrix.copy(), requires_grad=embedding.trainable)}
    for name, value in arrays.items():
        params[name] = Tensor(value, requires_grad=True)
    return params


def parameter_count(spec, vocab_size, dim):
    """Entry count implied by the shape table, for bookkeeping checks."""
    h = spec.hidden
    total = vocab_size * dim
    if spec.kind in ("lstm", "bilstm"):
        per_direction = dim * 4 * h + h * 4 * h + 4 * h
        total += per_direction * (2 if spec.kind == "bilstm" else 1)
    elif spec.kind in ("gru", "bigru"):
        per_direction = dim * 3 * h + h * 3 * h + 3 * h
        total += per_direction * (2 if spec.kind == "bigru" else 1)
    else:
        total += spec.conv_width * dim * spec.conv_filters + spec.conv_filters
    total += spec.feature_width() + 1
    return total


def _lstm_from_preact(preact, h_prev, c_prev, Wh, hidden):
    """Cell update given preact = x@Wx + b (the input projection)."""
    z = preact + matmul(h_prev, Wh)
    i = sigmoid(slice_last(z, 0, hidden))
    f = sigmoid(slice_last(z, hidden, 2 * hidden))
    g = tanh(slice_last(z, 2 * hidden, 3 * hidden))
    o = sigmoid(slice_last(z, 3 * hidden, 4 * hidden))
    c = mul(f, c_prev) + mul(i, g)
    h = mul(o, tanh(c))
    return h, c


def lstm_step(x, h_prev, c_prev, Wx, Wh, b, hidden):
    """One LSTM cell update; returns (h, c).

    Gates i, f, o are sigmoids of affine maps, the candidate g is a tanh,
    c = f*c_prev + i*g and h = o*tanh(c).
    """
    return _lstm_from_preact(matmul(x, Wx) + b, h_prev, c_prev, Wh, hidden)


def _gru_from_preact(preact, h_prev, Wh_gates, Wh_cand, hidden):
    """Cell update given preact = x@Wx + b and the two recurrent blocks."""
    gates = sigmoid(slice_last(preact, 0, 2 * hidden) + matmul(h_prev, Wh_gates))
    z = slice_last(gates, 0, hidden)
    r = slice_last(gates, hidden, 2 * hidden)
    candidate = tanh(
        slice_last(preact, 2 * hidden, 3 * hidden) + matmul(mul(r, h_prev), Wh_cand)
    )
    return mul(sub(1.0, z), h_prev) + mul(z, candidate)


def gru_step(x, h_prev, Wx, Wh, b, hidden):
    """One GRU cell update; returns h.

    z and r are sigmoid gates, the candidate uses r*h_prev in its recurrent
    term, and h = (1-z)*h_prev + z*candidate.
    """
    return _gru_from_preact(
        matmul(x, Wx) + b,
        h_prev,
        slice_last(Wh, 0, 2 * hidden),
        slice_last(Wh, 2 * hidden, 3 * hidden),
        hidden,
    )


def _as_batch(ids):
    ids = np.asarray(ids)
    if ids.ndim == 1:
        return ids.reshape(1, -1), True
    if ids.ndim == 2:
        return ids, False
    raise ShapeError(f"ids must be (T,) or (B,T), got {ids.shape}")


def _run_direction(ids, params, spec, prefix, reverse):
    # The input projection for every timestep is one big matmul; only the
    # recurrent term stays inside the loop.
    n_batch, n_steps = ids.shape
    h = Tensor(np.zeros((n_batch, spec.hidden)))
    is_lstm = spec.kind in ("lstm", "bilstm")
    c = Tensor(np.zeros((n_batch, spec.hidden))) if is_lstm else None
    Wx = params[f"{prefix}.Wx"]
    Wh = params[f"{prefix}.Wh"]
    b = params[f"{prefix}.b"]
    wide = Wx.shape[1]

    emb = embedding_lookup(params["embedding"], ids, pad_id=PAD_ID)
    flat = reshape(emb, (n_batch * n_steps, emb.shape[-1]))
    preact = reshape(matmul(flat, Wx), (n_batch, n_steps, wide)) + b
    if not is_lstm:
        Wh_gates = slice_last(Wh, 0, 2 * spec.hidden)
        Wh_cand = slice_last(Wh, 2 * spec.hidden, 3 * spec.hidden)

    steps = range(n_steps - 1, -1, -1) if reverse else range(n_steps)
    for t in steps:
        preact_t = slice_time(preact, t)
        if is_lstm:
            h, c = _lstm_from_preact(preact_t, h, c, Wh, spec.hidden)
        else:
            h = _gru_from_preact(preact_t, h, Wh_gates, Wh_cand, spec.hidden)
    return h


def run_sequence(ids, params, spec):
    """Feature vector(s) for encoded ids: (T,) -> (width,), (B,T) -> (B,width)."""
    batch, single = _as_batch(ids)
    if spec.kind in ("lstm", "gru"):
        prefix = "lstm" if spec.kind == "lstm" else "gru"
        feats = _run_direction(batch, params, spec, prefix, reverse=False)
    elif spec.kind in ("bilstm", "bigru"):
        forward = _run_direction(batch, params, spec, "fwd", reverse=False)
        backward_ = _run_direction(batch, params, spec, "bwd", reverse=True)
        feats = concat_last(forward, backward_)
    else:
        emb = embedding_lookup(params["embedding"], batch, pad_id=PAD_ID)
        cols = window_cols(emb, spec.conv_width)
        n_batch, n_out, wide = cols.shape
        flat = reshape(cols, (n_batch * n_out, wide))
        window_out = relu(matmul(flat, params["conv.W"]) + params["conv.b"])
        feats = max_over_time(reshape(window_out, (n_batch, n_out, spec.conv_filters)))
    if single:
        feats = reshape(feats, (feats.shape[-1],))
    return feats


def forward_probs(ids, params, spec):
    """Sigmoid output as a Tensor: (B,T) -> (B,), (T,) -> scalar-shaped (1,)."""
    batch, single = _as_batch(ids)
    feats = run_sequence(batch, params, spec)
    logits = matmul(feats, params["out.w"]) + params["out.b"]
    probs = sigmoid(reshape(logits, (batch.shape[0],)))
    return probs


def predict(ids, params, spec):
    """FR probability, tape-free: a float for (T,) input, ndarray for (B,T)."""
    ids_arr = np.asarray(ids)
    with no_grad():
        probs = forward_probs(ids_arr, params, spec)
    if ids_arr.ndim == 1:
        return float(probs.data[0])
    return probs.data.copy()
