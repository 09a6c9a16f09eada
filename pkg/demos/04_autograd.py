#!/usr/bin/env python3
"""The reverse-mode core: taped tensors, analytic gradients, Adam.

Every model in this package runs on these few operations. The gradient
checker compares each analytic gradient against central finite differences,
which is also how the five full architectures are verified (see the
``reqclass gradcheck`` command).
"""

import numpy as np

from reqclass.autograd import (
    Adam,
    Tensor,
    backward,
    bce_loss,
    gradient_check,
    matmul,
    sigmoid,
    total,
)
from reqclass.verification import run_gradcheck_suite

# A tensor remembers how it was produced; backward() fills gradients.
w = Tensor(np.array([[0.5], [-0.3]]), requires_grad=True)
x = Tensor(np.array([[1.0, 2.0], [3.0, 4.0]]))
loss = total(sigmoid(matmul(x, w)))
backward(loss)
print("dloss/dw:\n", w.grad)
print()

# Binary cross-entropy against labels, the training objective.
probs = Tensor(np.array([0.9, 0.2, 0.6]), requires_grad=True)
labels = np.array([1.0, 0.0, 1.0])
print("bce:", float(bce_loss(probs, labels).data))
print()

# Adam walks a quadratic downhill.
theta = Tensor(np.array([2.0]), requires_grad=True)
opt = Adam({"theta": theta}, lr=0.1)
for step in range(25):
    backward(total(theta * theta))
    opt.step()
    opt.zero_grad()
print("theta after 25 Adam steps from 2.0:", float(theta.data[0]))
print()

# Finite differences vs the tape, entry by entry.
w2 = Tensor(np.array([[0.2], [0.1]]), requires_grad=True)
err = gradient_check(lambda: total(matmul(x, w2)), {"w": w2})
print(f"linear-model gradient check: max relative error {err:.2e}")

print("toy-size check across the five architectures:")
for kind, err in run_gradcheck_suite().items():
    print(f"  {kind:8s} {err:.2e}")
