"""Dense float64 tensors with taped reverse-mode gradients.

This is the numeric substrate for the sequence classifiers: a small set of
operations, each carrying its analytic backward rule, plus the binary
cross-entropy loss, the Adam optimizer and a finite-difference gradient
checker. Everything is 64-bit and deterministic; there is no broadcasting
beyond what the models need (bias rows over leading axes).
"""

from __future__ import annotations

import math
from contextlib import contextmanager

import numpy as np

BCE_CLIP = 1e-7


class ShapeError(ValueError):
    """Operand shapes do not fit the operation."""


class NumericalInstabilityError(ArithmeticError):
    """A forward or backward pass produced non-finite values."""


_grad_enabled = True


@contextmanager
def no_grad():
    """Disable tape recording inside the block (inference / loss probes)."""
    global _grad_enabled
    previous = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = previous


class Tensor:
    """An ndarray plus an optional gradient accumulator.

    Intermediate tensors remember their parents and a backward closure;
    calling :func:`backward` on a scalar result walks the tape in reverse
    topological order and fills ``grad`` on every tensor that requires it.
    """

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False):
        if isinstance(data, np.ndarray) and data.dtype == np.float64:
            self.data = data
        else:
            self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    def zero_grad(self):
        self.grad = None

    def item(self):
        return float(self.data)

    def backward(self):
        backward(self)

    def __repr__(self):
        flag = ", requires_grad=True" if self.requires_grad else ""
        return f"Tensor(shape={self.data.shape}{flag})"

    # Operator sugar; the module-level functions hold the actual rules.
    def __matmul__(self, other):
        return matmul(self, other)

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(self, other)


def _accumulate(tensor, grad):
    if tensor.grad is None:
        tensor.grad = grad
    else:
        tensor.grad = tensor.grad + grad


def _make(data, parents, backward_fn):
    out = Tensor(data)
    if _grad_enabled and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward_fn
    return out


def _topo_order(root):
    """Iterative post-order over the tape (graphs can be 1000s of nodes deep)."""
    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen:
                stack.append((parent, False))
    return order


def backward(loss):
    """Backpropagate from a scalar tensor, accumulating into ``grad`` fields.

    The tape is dismantled as gradients flow, so each graph supports one
    backward pass; build a fresh graph per step (as the training loop does).
    """
    if loss.data.size != 1:
        raise ShapeError(f"backward needs a scalar, got shape {loss.data.shape}")
    order = _topo_order(loss)
    loss.grad = np.ones_like(loss.data)
    for node in reversed(order):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)
            if node is not loss:
                # Intermediate grads are not needed once propagated; freeing
                # them caps memory on long recurrent tapes.
                node.grad = None
                node._parents = ()
                node._backward = None


def as_tensor(value):
    return value if isinstance(value, Tensor) else Tensor(value)


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul needs (m,k)@(k,n), got {a.shape} @ {b.shape}")
    out_data = a.data @ b.data

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g @ b.data.T)
        if b.requires_grad:
            _accumulate(b, a.data.T @ g)

    return _make(out_data, (a, b), backward_fn)


def _check_addable(a, b, op):
    # Same shape, or a trailing-axis row (bias) against any leading axes.
    if a.shape == b.shape:
        return "same"
    if b.ndim == 1 and a.ndim >= 1 and a.shape[-1] == b.shape[0]:
        return "bias"
    raise ShapeError(f"{op} shapes differ: {a.shape} vs {b.shape}")


def add(a, b):
    if isinstance(b, (int, float)) or isinstance(a, (int, float)):
        scalar = b if isinstance(b, (int, float)) else a
        t = a if isinstance(b, (int, float)) else b
        t = as_tensor(t)
        out_data = t.data + scalar

        def backward_scalar(g):
            if t.requires_grad:
                _accumulate(t, g)

        return _make(out_data, (t,), backward_scalar)

    a, b = as_tensor(a), as_tensor(b)
    kind = _check_addable(a, b, "add")
    out_data = a.data + b.data

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g)
        if b.requires_grad:
            _accumulate(b, g if kind == "same" else g.reshape(-1, b.shape[0]).sum(axis=0))

    return _make(out_data, (a, b), backward_fn)


def sub(a, b):
    if isinstance(a, (int, float)):
        b = as_tensor(b)
        out_data = a - b.data

        def backward_lhs_scalar(g):
            if b.requires_grad:
                _accumulate(b, -g)

        return _make(out_data, (b,), backward_lhs_scalar)
    if isinstance(b, (int, float)):
        a = as_tensor(a)
        out_data = a.data - b

        def backward_rhs_scalar(g):
            if a.requires_grad:
                _accumulate(a, g)

        return _make(out_data, (a,), backward_rhs_scalar)

    a, b = as_tensor(a), as_tensor(b)
    kind = _check_addable(a, b, "sub")
    out_data = a.data - b.data

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g)
        if b.requires_grad:
            gb = g if kind == "same" else g.reshape(-1, b.shape[0]).sum(axis=0)
            _accumulate(b, -gb)

    return _make(out_data, (a, b), backward_fn)


def mul(a, b):
    if isinstance(b, (int, float)) or isinstance(a, (int, float)):
        scalar = b if isinstance(b, (int, float)) else a
        t = as_tensor(a if isinstance(b, (int, float)) else b)
        out_data = t.data * scalar

        def backward_scalar(g):
            if t.requires_grad:
                _accumulate(t, g * scalar)

        return _make(out_data, (t,), backward_scalar)

    a, b = as_tensor(a), as_tensor(b)
    if a.shape != b.shape:
        raise ShapeError(f"mul shapes differ: {a.shape} vs {b.shape}")
    out_data = a.data * b.data

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g * b.data)
        if b.requires_grad:
            _accumulate(b, g * a.data)

    return _make(out_data, (a, b), backward_fn)


def _sigmoid_values(x):
    # exp may overflow to inf for very negative x; 1/(1+inf) is a clean 0,
    # so the result stays exact and only the warning needs suppressing.
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-x))


def sigmoid(a):
    a = as_tensor(a)
    out_data = _sigmoid_values(a.data)

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g * out_data * (1.0 - out_data))

    return _make(out_data, (a,), backward_fn)


def tanh(a):
    a = as_tensor(a)
    out_data = np.tanh(a.data)

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g * (1.0 - out_data * out_data))

    return _make(out_data, (a,), backward_fn)


def relu(a):
    a = as_tensor(a)
    out_data = np.maximum(a.data, 0.0)

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g * (a.data > 0.0))

    return _make(out_data, (a,), backward_fn)


def activation(kind, a):
    """Dispatch by name; kept so configuration files can name activations."""
    try:
        fn = {"sigmoid": sigmoid, "tanh": tanh, "relu": relu}[kind]
    except KeyError:
        raise ValueError(f"unknown activation {kind!r}") from None
    return fn(a)


def elementwise(kind, a, b):
    try:
        fn = {"add": add, "mul": mul, "sub": sub}[kind]
    except KeyError:
        raise ValueError(f"unknown elementwise op {kind!r}") from None
    return fn(a, b)


def slice_last(a, lo, hi):
    """View of a along the last axis; backward adds into the parent buffer."""
    a = as_tensor(a)
    out_data = a.data[..., lo:hi]

    def backward_fn(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[..., lo:hi] += g

    return _make(out_data, (a,), backward_fn)


def concat_last(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != b.ndim or a.shape[:-1] != b.shape[:-1]:
        raise ShapeError(f"concat shapes differ off the last axis: {a.shape} vs {b.shape}")
    split = a.shape[-1]
    out_data = np.concatenate([a.data, b.data], axis=-1)

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g[..., :split])
        if b.requires_grad:
            _accumulate(b, g[..., split:])

    return _make(out_data, (a, b), backward_fn)


def reshape(a, shape):
    a = as_tensor(a)
    in_shape = a.data.shape
    out_data = a.data.reshape(shape)

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, g.reshape(in_shape))

    return _make(out_data, (a,), backward_fn)


def slice_time(a, t):
    """Timestep t of a (B,T,n) tensor as (B,n).

    The backward writes straight into the parent's gradient buffer, so T
    slices of one tensor cost one buffer instead of T scratch arrays; that
    keeps long recurrent tapes cheap.
    """
    a = as_tensor(a)
    if a.ndim != 3:
        raise ShapeError(f"slice_time needs (B,T,n), got {a.shape}")
    out_data = a.data[:, t, :]

    def backward_fn(g):
        if a.requires_grad:
            if a.grad is None:
                a.grad = np.zeros_like(a.data)
            a.grad[:, t, :] += g

    return _make(out_data, (a,), backward_fn)


def embedding_lookup(table, ids, pad_id=None):
    """Gather rows of ``table`` (V,d) by integer ids of any shape.

    Rows equal to ``pad_id`` receive no gradient, which keeps the padding
    vector constant through training.
    """
    table = as_tensor(table)
    if table.ndim != 2:
        raise ShapeError(f"embedding table must be 2-D, got {table.shape}")
    ids = np.asarray(ids)
    out_data = table.data[ids]

    def backward_fn(g):
        if table.requires_grad:
            grad = np.zeros_like(table.data)
            flat_ids = ids.reshape(-1)
            flat_g = g.reshape(-1, table.shape[1])
            if pad_id is not None:
                keep = flat_ids != pad_id
                flat_ids = flat_ids[keep]
                flat_g = flat_g[keep]
            np.add.at(grad, flat_ids, flat_g)
            _accumulate(table, grad)

    return _make(out_data, (table,), backward_fn)


def window_cols(a, width):
    """(B,T,d) -> (B, T-width+1, width*d): flattened sliding token windows."""
    a = as_tensor(a)
    if a.ndim != 3:
        raise ShapeError(f"window_cols needs (B,T,d), got {a.shape}")
    n_batch, n_steps, dim = a.shape
    if width < 1 or width > n_steps:
        raise ShapeError(f"window width {width} does not fit sequence length {n_steps}")
    n_out = n_steps - width + 1
    out_data = np.concatenate([a.data[:, j:j + n_out, :] for j in range(width)], axis=2)

    def backward_fn(g):
        if a.requires_grad:
            grad = np.zeros_like(a.data)
            for j in range(width):
                grad[:, j:j + n_out, :] += g[:, :, j * dim:(j + 1) * dim]
            _accumulate(a, grad)

    return _make(out_data, (a,), backward_fn)


def max_over_time(a):
    """Column-wise max over the time axis: (T,d)->(d,) or (B,T,d)->(B,d).

    Ties send the gradient to the earliest maximal timestep.
    """
    a = as_tensor(a)
    if a.ndim not in (2, 3):
        raise ShapeError(f"max_over_time needs (T,d) or (B,T,d), got {a.shape}")
    axis = 0 if a.ndim == 2 else 1
    if a.shape[axis] == 0:
        raise ShapeError("max_over_time over an empty time axis")
    arg = np.argmax(a.data, axis=axis)
    out_data = np.max(a.data, axis=axis)

    def backward_fn(g):
        if a.requires_grad:
            grad = np.zeros_like(a.data)
            np.put_along_axis(grad, np.expand_dims(arg, axis), np.expand_dims(g, axis), axis)
            _accumulate(a, grad)

    return _make(out_data, (a,), backward_fn)


def total(a):
    """Sum of all entries as a scalar tensor (a backward seed for tests)."""
    a = as_tensor(a)
    out_data = np.asarray(a.data.sum())

    def backward_fn(g):
        if a.requires_grad:
            _accumulate(a, np.broadcast_to(g, a.data.shape).copy())

    return _make(out_data, (a,), backward_fn)


def bce_loss(p, y):
    """Mean binary cross-entropy of probabilities ``p`` against labels ``y``.

    Probabilities are clamped to [BCE_CLIP, 1 - BCE_CLIP] before the log, so
    saturated outputs cannot produce infinite loss; clamped entries get zero
    gradient (the clamp is flat there).
    """
    p = as_tensor(p)
    y = np.asarray(y, dtype=np.float64)
    if p.data.shape != y.shape:
        raise ShapeError(f"bce_loss shapes differ: {p.shape} vs {y.shape}")
    clipped = np.clip(p.data, BCE_CLIP, 1.0 - BCE_CLIP)
    losses = -(y * np.log(clipped) + (1.0 - y) * np.log(1.0 - clipped))
    out_data = np.asarray(losses.mean())
    count = max(y.size, 1)

    def backward_fn(g):
        if p.requires_grad:
            inside = (p.data >= BCE_CLIP) & (p.data <= 1.0 - BCE_CLIP)
            grad = inside * (clipped - y) / (clipped * (1.0 - clipped)) / count
            _accumulate(p, g * grad)

    return _make(out_data, (p,), backward_fn)


class AdamState:
    """First/second moment accumulators plus the shared step counter."""

    def __init__(self, lr=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m = {}
        self.v = {}


def adam_step(params, grads, state):
    """One Adam update over named parameters; mutates data and state in place.

    m <- b1*m + (1-b1)*g, v <- b2*v + (1-b2)*g^2, then the bias-corrected
    step theta <- theta - lr * m_hat / (sqrt(v_hat) + eps). A missing or
    zero gradient with zero moments leaves the parameter untouched.
    """
    state.t += 1
    correction1 = 1.0 - state.beta1 ** state.t
    correction2 = 1.0 - state.beta2 ** state.t
    for name, p in params.items():
        g = grads.get(name)
        if g is None:
            g = np.zeros_like(p.data)
        m = state.m.get(name)
        if m is None:
            m = np.zeros_like(p.data)
            state.m[name] = m
            state.v[name] = np.zeros_like(p.data)
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g * g
        m_hat = m / correction1
        v_hat = v / correction2
        p.data -= state.lr * m_hat / (np.sqrt(v_hat) + state.epsilon)
    return params, state


class Adam:
    """Convenience wrapper binding an AdamState to a parameter dict."""

    def __init__(self, params, lr=0.001, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.params = {name: p for name, p in params.items() if p.requires_grad}
        self.state = AdamState(lr=lr, beta1=beta1, beta2=beta2, epsilon=epsilon)

    def step(self):
        grads = {name: p.grad for name, p in self.params.items() if p.grad is not None}
        adam_step(self.params, grads, self.state)

    def zero_grad(self):
        for p in self.params.values():
            p.grad = None


def gradient_check(forward_fn, params, h=1e-5):
    """Max relative error between analytic and central-difference gradients.

    ``forward_fn`` must rebuild the graph from the current parameter data and
    return a scalar Tensor. Every parameter entry is probed with
    (f(x+h) - f(x-h)) / 2h and compared as |a-n| / max(|a|, |n|, 1e-8).
    """
    for p in params.values():
        p.grad = None
    loss = forward_fn()
    if not np.isfinite(loss.data).all():
        raise NumericalInstabilityError("forward pass produced non-finite loss")
    backward(loss)
    analytic = {
        name: (p.grad.copy() if p.grad is not None else np.zeros_like(p.data))
        for name, p in params.items()
    }
    for p in params.values():
        p.grad = None

    worst = 0.0
    for name, p in params.items():
        flat = p.data.reshape(-1)
        flat_analytic = analytic[name].reshape(-1)
        for i in range(flat.size):
            saved = flat[i]
            flat[i] = saved + h
            with no_grad():
                f_plus = float(forward_fn().data)
            flat[i] = saved - h
            with no_grad():
                f_minus = float(forward_fn().data)
            flat[i] = saved
            if not (math.isfinite(f_plus) and math.isfinite(f_minus)):
                raise NumericalInstabilityError(
                    f"non-finite finite-difference probe at {name}[{i}]"
                )
            numeric = (f_plus - f_minus) / (2.0 * h)
            a = flat_analytic[i]
            err = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            if err > worst:
                worst = err
    return worst
