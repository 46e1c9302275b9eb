"""CART classification tree with Gini impurity.

Nodes live in flat arrays (an arena): ``feature[i] == -1`` marks a leaf.
Samples with ``x[feature] <= threshold`` go left.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

# Gini decreases closer than this are treated as ties; exact ties in rational
# arithmetic land within ~1e-16 of each other in float64.
TIE_EPS = 1e-12
LEAF = -1


@dataclass(frozen=True)
class TreeConfig:
    max_depth: Optional[int] = 12
    min_samples_split: int = 2
    min_impurity_decrease: float = 0.0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be >= 2")
        if self.min_impurity_decrease < 0:
            raise ValueError("min_impurity_decrease must be >= 0")


@dataclass(frozen=True, eq=False)
class TreeModel:
    feature: np.ndarray     # int, LEAF for leaves
    threshold: np.ndarray   # float, unused (0.0) for leaves
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray      # (n_nodes, 2) class counts reaching each node
    config: TreeConfig

    @property
    def n_nodes(self):
        return len(self.feature)

    @property
    def leaf_class(self):
        # majority class, ties go to 0
        return (self.counts[:, 1] > self.counts[:, 0]).astype(np.int64)

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if self.feature[node] != LEAF:
                stack.append((self.left[node], d + 1))
                stack.append((self.right[node], d + 1))
        return best

    def apply(self, X) -> np.ndarray:
        """Index of the leaf each row of ``X`` lands in."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        active = self.feature[node] != LEAF
        while active.any():
            r = rows[active]
            nd = node[active]
            goes_left = X[r, self.feature[nd]] <= self.threshold[nd]
            node[active] = np.where(goes_left, self.left[nd], self.right[nd])
            active = self.feature[node] != LEAF
        return node

    def predict_proba(self, X):
        leaf = self.apply(X)
        c = self.counts[leaf]
        return c[:, 1] / c.sum(axis=1)

    def predict_vote(self, X):
        return self.leaf_class[self.apply(X)]


def gini_impurity(class_counts) -> float:
    n0, n1 = class_counts
    n = n0 + n1
    if n < 1:
        raise ValueError("gini impurity is undefined for an empty node")
    p0, p1 = n0 / n, n1 / n
    return 1.0 - p0 * p0 - p1 * p1


def best_split(X, y, candidate_features=None):
    """Best single-feature threshold split of ``(X, y)`` by Gini decrease.

    Candidate thresholds are midpoints between consecutive distinct values.
    Ties go to the lower feature index, then the lower threshold. Returns
    ``(feature, threshold, impurity_decrease)`` or ``None`` when no split
    decreases impurity.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = len(y)
    if n < 2:
        return None
    if candidate_features is None:
        candidate_features = range(X.shape[1])
    n1 = int(y.sum())
    parent = gini_impurity((n - n1, n1))
    if parent == 0.0:
        return None

    n_left = np.arange(1, n, dtype=np.float64)
    n_right = n - n_left
    best = None
    best_decrease = TIE_EPS
    for f in sorted(candidate_features):
        col = X[:, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        boundary = xs[1:] > xs[:-1]
        if not boundary.any():
            continue
        l1 = np.cumsum(y[order])[:-1][boundary]
        nl = n_left[boundary]
        nr = n_right[boundary]
        r1 = n1 - l1
        # weighted child impurity: sum over sides of (n_side - sum_k c_k^2 / n_side) / n
        child = (nl - (l1 ** 2 + (nl - l1) ** 2) / nl
                 + nr - (r1 ** 2 + (nr - r1) ** 2) / nr) / n
        decrease = parent - child
        top = decrease.max()
        if top <= best_decrease:
            continue
        k = int(np.argmax(decrease >= top - TIE_EPS))
        pos = np.flatnonzero(boundary)[k]
        best = (int(f), float((xs[pos] + xs[pos + 1]) / 2.0), float(decrease[k]))
        best_decrease = float(top) + TIE_EPS
    return best


def fit_tree(X, y, config: TreeConfig = TreeConfig(), feature_sampler=None) -> TreeModel:
    """Grow a CART tree depth-first.

    ``feature_sampler``, when given, is called at every split with the
    feature count and must return the candidate feature indices; the forest
    uses it for per-split feature subsampling.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if len(y) == 0:
        raise ValueError("cannot fit a tree on an empty training set")
    d = X.shape[1]
    all_features = list(range(d))
    max_depth = config.max_depth

    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(rows):
        n1 = int(y[rows].sum())
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        counts.append((len(rows) - n1, n1))
        return len(feature) - 1

    stack = [(new_node(np.arange(len(y))), np.arange(len(y)), 0)]
    while stack:
        node, rows, depth = stack.pop()
        n0, n1 = counts[node]
        if (n0 == 0 or n1 == 0
                or len(rows) < config.min_samples_split
                or (max_depth is not None and depth >= max_depth)):
            continue
        candidates = all_features if feature_sampler is None else feature_sampler(d)
        split = best_split(X[rows], y[rows], candidates)
        if split is None or split[2] <= config.min_impurity_decrease:
            continue
        f, thr, _ = split
        mask = X[rows, f] <= thr
        lrows, rrows = rows[mask], rows[~mask]
        lnode = new_node(lrows)
        rnode = new_node(rrows)
        feature[node], threshold[node] = f, thr
        left[node], right[node] = lnode, rnode
        # right pushed first so the left subtree is grown (and numbered) first
        stack.append((rnode, rrows, depth + 1))
        stack.append((lnode, lrows, depth + 1))

    return TreeModel(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        counts=np.array(counts, dtype=np.int64).reshape(-1, 2),
        config=config,
    )
