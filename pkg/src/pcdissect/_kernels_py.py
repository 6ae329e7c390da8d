"""NumPy implementations of the numeric hot loops.

These define the reference semantics for pcdissect._ckernels; the
compiled versions must agree with them to float64 rounding.  All inputs
are float64 C-contiguous arrays (int64 for label indices).
"""

from __future__ import annotations

import numpy as np


def logreg_loss_grad(
    xb: np.ndarray, y: np.ndarray, w: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean softmax cross-entropy and its gradient w.r.t. ``w``.

    ``xb`` is (n, k) features with bias column folded in, ``y`` (n,) class
    indices, ``w`` (c, k) weights.  Regularization is the caller's job.
    """
    n = xb.shape[0]
    logits = xb @ w.T
    m = logits.max(axis=1, keepdims=True)
    e = np.exp(logits - m)
    z = e.sum(axis=1, keepdims=True)
    rows = np.arange(n)
    logp = (logits - m) - np.log(z)
    loss = -logp[rows, y].sum() / n
    p = e / z
    p[rows, y] -= 1.0
    grad = p.T @ xb
    grad /= n
    return float(loss), grad


def logreg_loss(xb: np.ndarray, y: np.ndarray, w: np.ndarray) -> float:
    """Loss-only variant used by the backtracking line search."""
    n = xb.shape[0]
    logits = xb @ w.T
    m = logits.max(axis=1, keepdims=True)
    z = np.exp(logits - m).sum(axis=1)
    logp = (logits[np.arange(n), y] - m[:, 0]) - np.log(z)
    return float(-logp.sum() / n)


def remove_projections(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Subtract each row's projections onto the columns of ``u``, in place.

    Coefficients are taken from the original row (single shot, not
    sequential), i.e. row := row - u @ (u.T @ row).
    """
    if u.shape[1]:
        coef = x @ u
        x -= coef @ u.T
    return x
