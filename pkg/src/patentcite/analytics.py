"""Descriptive analytics: correlation matrix, class balance, citation cohorts."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import DataError, Dataset


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    labels: tuple
    values: np.ndarray
    constant_columns: tuple = ()

    def __getitem__(self, key):
        a, b = key
        return float(self.values[self.labels.index(a), self.labels.index(b)])

    def to_text(self, width=9) -> str:
        head = " " * 17 + "".join(f"{lab[:width - 1]:>{width}}" for lab in self.labels)
        lines = [head]
        for i, lab in enumerate(self.labels):
            cells = "".join(f"{v:>{width}.3f}" for v in self.values[i])
            lines.append(f"{lab:<17}{cells}")
        if self.constant_columns:
            lines.append("constant columns (correlation set to 0): "
                         + ", ".join(self.constant_columns))
        return "\n".join(lines)


@dataclass(frozen=True)
class ThresholdReport:
    threshold: int
    above_threshold: int
    above_and_patented: int
    fraction: float

    def to_text(self) -> str:
        return (
            f"papers with more than {self.threshold} citations: {self.above_threshold}\n"
            f"  of which cited by patents: {self.above_and_patented} "
            f"({self.fraction:.1%})"
        )


def _is_constant(col) -> bool:
    return col.size == 0 or bool(np.all(col == col[0]))


def pearson(x, y) -> float:
    """Pearson product-moment correlation of two equal-length columns.

    A constant column has no defined correlation; 0.0 is returned instead.
    Use :func:`pearson_flagged` to learn whether that happened.
    """
    return pearson_flagged(x, y)[0]


def pearson_flagged(x, y) -> tuple[float, bool]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("pearson needs two 1-d columns of equal length")
    if len(x) < 2:
        raise ValueError("pearson needs at least 2 observations")
    if _is_constant(x) or _is_constant(y):
        return 0.0, True
    dx = x - x.mean()
    dy = y - y.mean()
    r = float(np.dot(dx, dy) / math.sqrt(float(np.dot(dx, dx)) * float(np.dot(dy, dy))))
    return min(1.0, max(-1.0, r)), False


def _analytics_columns(dataset: Dataset, log1p: bool):
    labels = dataset.feature_names + ("paper_citations", "patent_citations")
    cols = [dataset.features[:, j] for j in range(dataset.n_features)]
    cols += [dataset.paper_citations.astype(np.float64),
             dataset.patent_citations.astype(np.float64)]
    if log1p:
        cols = [np.log1p(c) for c in cols]
    return labels, cols


def correlation_matrix(dataset: Dataset, log1p: bool = False) -> CorrelationMatrix:
    """Pairwise Pearson matrix over the features, paper citations and raw
    patent-citation counts."""
    if len(dataset) < 2:
        raise DataError("correlation needs at least 2 rows")
    labels, cols = _analytics_columns(dataset, log1p)
    k = len(cols)
    values = np.zeros((k, k))
    constant = tuple(lab for lab, c in zip(labels, cols) if _is_constant(c))
    for i in range(k):
        if labels[i] not in constant:
            values[i, i] = 1.0
        for j in range(i + 1, k):
            values[i, j] = values[j, i] = pearson(cols[i], cols[j])
    values.flags.writeable = False
    return CorrelationMatrix(labels=tuple(labels), values=values, constant_columns=constant)


def class_balance(dataset: Dataset) -> tuple[int, int]:
    positives = int(dataset.labels.sum())
    return positives, len(dataset) - positives


def citation_threshold_analysis(dataset: Dataset, threshold: int = 100) -> ThresholdReport:
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    above = dataset.paper_citations > threshold
    n_above = int(above.sum())
    n_patented = int(dataset.labels[above].sum())
    fraction = n_patented / n_above if n_above else 0.0
    return ThresholdReport(threshold, n_above, n_patented, fraction)


def emit_heatmap_data(matrix: CorrelationMatrix, path) -> None:
    """Write the matrix as long-format ``row,col,value`` CSV lines."""
    lines = []
    for i, row in enumerate(matrix.labels):
        for j, col in enumerate(matrix.labels):
            lines.append(f"{row},{col},{matrix.values[i, j]:.6f}\n")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc.strerror}") from None
