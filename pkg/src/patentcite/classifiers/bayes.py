"""Gaussian naive Bayes on log1p-transformed counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class NBConfig:
    variance_floor: float = 1e-9

    def __post_init__(self):
        if not self.variance_floor > 0:
            raise ValueError("variance_floor must be positive")


@dataclass(frozen=True, eq=False)
class NBModel:
    class_priors: np.ndarray  # (2,)
    means: np.ndarray         # (2, d), on log1p scale
    variances: np.ndarray     # (2, d), floored
    variance_floor: float

    @property
    def n_features(self):
        return self.means.shape[1]

    def joint_log_likelihood(self, X):
        """``log P(c) + sum_j log N(log1p(x_j) | mean_cj, var_cj)`` per class."""
        Z = np.log1p(np.atleast_2d(np.asarray(X, dtype=np.float64)))
        out = np.empty((Z.shape[0], 2))
        for c in (0, 1):
            var = self.variances[c]
            ll = -0.5 * (np.log(2.0 * np.pi * var) + (Z - self.means[c]) ** 2 / var)
            out[:, c] = np.log(self.class_priors[c]) + ll.sum(axis=1)
        return out

    def posteriors(self, X):
        jll = self.joint_log_likelihood(X)
        jll = jll - jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def predict_proba(self, X):
        return self.posteriors(X)[:, 1]


def fit_naive_bayes(X, y, config: NBConfig = NBConfig()) -> NBModel:
    Z = np.log1p(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    if Z.shape[0] != len(y):
        raise ValueError("X and y have different row counts")
    counts = np.bincount(y, minlength=2)
    if (counts == 0).any():
        raise ValueError("naive Bayes needs both classes in the training set")
    priors = counts / counts.sum()
    means = np.vstack([Z[y == c].mean(axis=0) for c in (0, 1)])
    # population variance (ddof=0)
    variances = np.vstack([Z[y == c].var(axis=0) for c in (0, 1)])
    variances = np.maximum(variances, config.variance_floor)
    return NBModel(priors, means, variances, config.variance_floor)


def nb_posterior(model: NBModel, features) -> float:
    """Posterior probability of class 1 for one feature vector."""
    x = np.asarray(features, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(
            f"expected {model.n_features} features, got shape {x.shape}"
        )
    return float(model.posteriors(x)[0, 1])
