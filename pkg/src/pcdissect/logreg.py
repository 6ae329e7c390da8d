"""Deterministic multinomial logistic regression.

Full-batch gradient descent with a backtracking (halving) line search
from zero initialization: no randomness anywhere, so retraining on the
same inputs is bit-identical and the convex objective pins the optimum.
The objective is mean softmax cross-entropy plus (l2/2) * ||W||^2 over
the non-bias weights.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    LengthMismatch,
    NonFiniteFeature,
    SingleClass,
)

_ARMIJO = 1e-4


@dataclass(frozen=True)
class LogRegConfig:
    """Training knobs.  ``l2_strength=None`` resolves to 1/n_samples at fit
    time (the resolved value is echoed in the model metadata).

    ``standardize`` optimizes in standardized feature space (off by
    default: embedding features are already comparable in scale, and
    standardizing would distort band-split comparisons).  The learned
    weights are folded back so the model always predicts on raw features.
    """

    l2_strength: Optional[float] = None
    max_iters: int = 500
    tolerance: float = 1e-6
    initial_step: float = 1.0
    max_backtracks: int = 50
    standardize: bool = False

    def __post_init__(self):
        if self.l2_strength is not None and self.l2_strength < 0:
            raise ValueError("l2_strength must be non-negative")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.tolerance <= 0 or self.initial_step <= 0:
            raise ValueError("tolerance and initial_step must be positive")


@dataclass(frozen=True)
class LogRegModel:
    """Trained weights, C x (d+1) with the bias folded in as the last
    column; classes are ordered by first appearance in the training data."""

    classes: tuple
    weights: np.ndarray
    metadata: dict

    def __post_init__(self):
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        if not np.isfinite(w).all():
            raise NonFiniteFeature("model weights contain non-finite entries")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def feature_dim(self) -> int:
        return self.weights.shape[1] - 1

    def to_json(self) -> str:
        payload = {
            "classes": list(self.classes),
            "shape": list(self.weights.shape),
            "weights": self.weights.ravel().tolist(),
            "metadata": {
                k: v for k, v in self.metadata.items() if k != "loss_history"
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "LogRegModel":
        payload = json.loads(text)
        shape = tuple(payload["shape"])
        weights = np.array(payload["weights"], dtype=np.float64).reshape(shape)
        return cls(tuple(payload["classes"]), weights, payload["metadata"])


def _with_bias(features: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(
        np.hstack([features, np.ones((features.shape[0], 1))])
    )


def _check_features(features) -> np.ndarray:
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionMismatch("features must be a 2-D matrix")
    if not np.isfinite(x).all():
        raise NonFiniteFeature("features contain NaN or infinite entries")
    return x


def train_logreg(
    features, labels: Sequence, cfg: LogRegConfig = LogRegConfig()
) -> LogRegModel:
    """Minimize the regularized objective by deterministic descent.

    Stops at gradient norm < tolerance or after max_iters; hitting the
    iteration cap is not an error -- the best (latest) iterate is returned
    with ``converged: False`` in the metadata.
    """
    x = _check_features(features)
    n = x.shape[0]
    if n < 2:
        raise DegenerateInput(f"need at least 2 training rows, got {n}")
    if len(labels) != n:
        raise LengthMismatch(f"{n} feature rows but {len(labels)} labels")

    classes: list = []
    seen: dict = {}
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(classes)
            classes.append(lab)
    if len(classes) < 2:
        raise SingleClass(f"training data has a single label {classes[0]!r}")
    y = np.array([seen[lab] for lab in labels], dtype=np.int64)

    shift = scale = None
    if cfg.standardize:
        shift = x.mean(axis=0)
        scale = x.std(axis=0)
        scale[scale < 1e-12] = 1.0
        x = (x - shift) / scale

    xb = _with_bias(x)
    n_classes = len(classes)
    n_params = xb.shape[1]
    l2 = cfg.l2_strength if cfg.l2_strength is not None else 1.0 / n
    w = np.zeros((n_classes, n_params), dtype=np.float64)

    def objective_grad(wm: np.ndarray) -> tuple[float, np.ndarray]:
        loss, grad = kernels.logreg_loss_grad(xb, y, wm)
        loss += 0.5 * l2 * float(np.sum(wm[:, :-1] ** 2))
        grad[:, :-1] += l2 * wm[:, :-1]
        return loss, grad

    def objective(wm: np.ndarray) -> float:
        return kernels.logreg_loss(xb, y, wm) + 0.5 * l2 * float(
            np.sum(wm[:, :-1] ** 2)
        )

    loss_history: list[float] = []
    converged = False
    grad_norm = np.inf
    iterations = 0
    for iterations in range(1, cfg.max_iters + 1):
        loss, grad = objective_grad(w)
        loss_history.append(loss)
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm < cfg.tolerance:
            converged = True
            iterations -= 1
            break
        step = cfg.initial_step
        accepted = False
        for _ in range(cfg.max_backtracks):
            trial = w - step * grad
            if objective(trial) <= loss - _ARMIJO * step * grad_norm**2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            iterations -= 1
            break  # descent stalled at float precision; keep current iterate
        w = trial

    if cfg.standardize:
        # fold the standardization into the weights: the stored model
        # predicts on raw features with identical logits
        folded = w.copy()
        folded[:, :-1] = w[:, :-1] / scale
        folded[:, -1] = w[:, -1] - folded[:, :-1] @ shift
        w = folded

    metadata = {
        "iterations": iterations,
        "final_grad_norm": grad_norm,
        "converged": converged,
        "l2_strength": l2,
        "standardize": cfg.standardize,
        "tolerance": cfg.tolerance,
        "max_iters": cfg.max_iters,
        "loss_history": loss_history,
    }
    return LogRegModel(tuple(classes), w, metadata)


def predict(model: LogRegModel, features) -> list:
    """Argmax of the softmax logits per row; exact ties go to the lowest
    class index."""
    x = _check_features(features)
    if x.shape[1] != model.feature_dim:
        raise DimensionMismatch(
            f"features have dim {x.shape[1]}, model expects {model.feature_dim}"
        )
    logits = _with_bias(x) @ model.weights.T
    picks = np.argmax(logits, axis=1)
    return [model.classes[i] for i in picks]


def accuracy(predicted: Sequence, gold: Sequence) -> float:
    """Exact-match fraction."""
    if len(predicted) != len(gold):
        raise LengthMismatch(f"{len(predicted)} predictions vs {len(gold)} gold")
    if len(gold) < 1:
        raise LengthMismatch("need at least one prediction")
    hits = sum(1 for p, g in zip(predicted, gold) if p == g)
    return hits / len(gold)
