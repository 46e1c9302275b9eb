"""Random forest of CART trees with bootstrap samples and per-split feature
subsampling."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .tree import TreeConfig, TreeModel, fit_tree


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    features_per_split: Optional[int] = None  # None -> floor(sqrt(d))
    bootstrap: bool = True
    seed: int = 0
    max_depth: Optional[int] = 12
    min_samples_split: int = 2
    min_impurity_decrease: float = 0.0
    n_jobs: int = 1

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("a forest needs at least one tree")

    @property
    def tree_config(self) -> TreeConfig:
        return TreeConfig(self.max_depth, self.min_samples_split, self.min_impurity_decrease)

    def resolve_m(self, n_features: int) -> int:
        m = self.features_per_split
        if m is None:
            m = max(1, math.isqrt(n_features))
        if not 1 <= m <= n_features:
            raise ValueError(f"features_per_split={m} outside [1, {n_features}]")
        return m


@dataclass(frozen=True, eq=False)
class ForestModel:
    trees: tuple
    features_per_split: int
    bootstrap: bool
    master_seed: int
    config: ForestConfig

    def predict_proba(self, X):
        """Fraction of trees whose leaf majority is class 1."""
        votes = np.zeros(np.atleast_2d(X).shape[0])
        for tree in self.trees:
            votes += tree.predict_vote(X)
        return votes / len(self.trees)


def tree_seeds(master_seed: int, n_trees: int):
    """Independent per-tree seed sequences derived from one master seed."""
    return np.random.SeedSequence(master_seed).spawn(n_trees)


def _fit_one(X, y, seed_seq, m, config: ForestConfig) -> TreeModel:
    rng = np.random.default_rng(seed_seq)
    n, d = X.shape
    if config.bootstrap:
        rows = rng.integers(0, n, size=n)
        X, y = X[rows], y[rows]
    sampler = None
    if m < d:
        def sampler(d):
            return np.sort(rng.choice(d, size=m, replace=False))
    return fit_tree(X, y, config.tree_config, feature_sampler=sampler)


def fit_forest(X, y, config: ForestConfig = ForestConfig()) -> ForestModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(y) < 2 or len(np.unique(y)) < 2:
        raise ValueError("random forest needs at least 2 rows covering both classes")
    m = config.resolve_m(X.shape[1])
    seeds = tree_seeds(config.seed, config.n_trees)
    if config.n_jobs > 1:
        with ThreadPoolExecutor(config.n_jobs) as pool:
            # map preserves submission order, so the forest matches sequential training
            trees = list(pool.map(lambda s: _fit_one(X, y, s, m, config), seeds))
    else:
        trees = [_fit_one(X, y, s, m, config) for s in seeds]
    return ForestModel(
        trees=tuple(trees),
        features_per_split=m,
        bootstrap=config.bootstrap,
        master_seed=config.seed,
        config=config,
    )
