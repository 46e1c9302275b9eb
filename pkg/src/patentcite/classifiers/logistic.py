"""Binary logistic regression trained by full-batch gradient descent."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PROB_EPS = 1e-15
TRANSFORMS = ("none", "log1p")


@dataclass(frozen=True)
class LogisticConfig:
    learning_rate: float = 0.2
    l2: float = 0.0
    max_iters: int = 20000
    tolerance: float = 1e-9
    transform: str = "log1p"

    def __post_init__(self):
        if self.transform not in TRANSFORMS:
            raise ValueError(f"transform must be one of {TRANSFORMS}")
        if self.learning_rate <= 0 or self.max_iters < 1 or self.l2 < 0:
            raise ValueError("invalid logistic regression config")


@dataclass(frozen=True, eq=False)
class LogisticModel:
    weights: np.ndarray
    bias: float
    transform: str
    config: LogisticConfig

    def decision_function(self, X):
        return apply_transform(X, self.transform) @ self.weights + self.bias

    def predict_proba(self, X):
        return sigmoid(self.decision_function(X))


def apply_transform(X, transform: str):
    X = np.asarray(X, dtype=np.float64)
    if transform == "log1p":
        return np.log1p(X)
    return X


def sigmoid(z):
    """Logistic function, clamped to [1e-15, 1 - 1e-15]."""
    z = np.asarray(z, dtype=np.float64)
    # two-branch form avoids overflow in exp for large |z|
    ez = np.exp(-np.abs(z))
    out = np.where(z >= 0, 1.0 / (1.0 + ez), ez / (1.0 + ez))
    out = np.clip(out, PROB_EPS, 1.0 - PROB_EPS)
    return out if out.ndim else float(out)


def logistic_loss_and_gradient(weights, bias, X, y, l2=0.0):
    """Mean binary cross-entropy plus ``l2/2 * ||w||^2`` and its gradient.

    ``X`` is used as given (any feature transform must already be applied).
    Returns ``(loss, grad_weights, grad_bias)``; the bias is not regularized.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if X.ndim != 2 or w.shape != (X.shape[1],) or y.shape != (X.shape[0],):
        raise ValueError(
            f"dimension mismatch: X{X.shape}, weights{w.shape}, labels{y.shape}"
        )
    n = X.shape[0]
    z = X @ w + bias
    # log(1 + e^z) - y*z is the cross-entropy written stably in terms of z
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z)) + 0.5 * l2 * float(w @ w)
    resid = sigmoid(z) - y
    grad_w = X.T @ resid / n + l2 * w
    grad_b = float(resid.sum() / n)
    return loss, grad_w, grad_b


def fit_logistic(X, y, config: LogisticConfig = LogisticConfig(), history=None) -> LogisticModel:
    """Gradient descent from zero weights.

    Stops after ``max_iters`` steps or once an iteration improves the loss by
    less than ``tolerance``. If ``history`` is a list, per-iteration losses
    are appended to it.
    """
    y = np.asarray(y)
    if len(np.unique(y)) < 2:
        raise ValueError("logistic regression needs both classes in the training set")
    Xt = apply_transform(X, config.transform)
    w = np.zeros(Xt.shape[1])
    b = 0.0
    loss, gw, gb = logistic_loss_and_gradient(w, b, Xt, y, config.l2)
    if history is not None:
        history.append(loss)
    for _ in range(config.max_iters):
        w = w - config.learning_rate * gw
        b = b - config.learning_rate * gb
        new_loss, gw, gb = logistic_loss_and_gradient(w, b, Xt, y, config.l2)
        if history is not None:
            history.append(new_loss)
        if loss - new_loss < config.tolerance:
            break
        loss = new_loss
    return LogisticModel(weights=w, bias=float(b), transform=config.transform, config=config)
