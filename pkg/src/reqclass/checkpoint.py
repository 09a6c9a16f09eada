"""Deterministic binary checkpoints for a trained model.

Layout: a magic string, a length-prefixed JSON header describing the model
spec, the vocabulary and the tensor table, then each tensor's float64 bytes
in header order. The encoding has no timestamps and sorts all keys, so
save -> load -> save reproduces the file byte for byte.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .autograd import Tensor
from .models import ModelSpec

MAGIC = b"RQCKPT1\n"


class CheckpointError(ValueError):
    pass


def save(path, spec, params, vocab_id_of, extra=None):
    names = sorted(params)
    header = {
        "spec": {
            "kind": spec.kind,
            "max_len": spec.max_len,
            "hidden": spec.hidden,
            "conv_filters": spec.conv_filters,
            "conv_width": spec.conv_width,
            "embedding_mode": spec.embedding_mode,
        },
        "vocab": vocab_id_of,
        "tensors": [
            {
                "name": name,
                "shape": list(params[name].data.shape),
                "trainable": bool(params[name].requires_grad),
            }
            for name in names
        ],
        "extra": extra or {},
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for name in names:
            fh.write(np.ascontiguousarray(params[name].data, dtype="<f8").tobytes())


def load(path):
    """Returns (spec, params, vocab_id_of, extra)."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a model checkpoint")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        spec = ModelSpec(**header["spec"])
        params = {}
        for entry in header["tensors"]:
            shape = tuple(entry["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise CheckpointError(f"{path}: truncated tensor {entry['name']}")
            data = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
            params[entry["name"]] = Tensor(data, requires_grad=entry["trainable"])
    return spec, params, header["vocab"], header["extra"]
